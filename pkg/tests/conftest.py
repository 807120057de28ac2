from __future__ import annotations

import pytest

from mtrain.demo import build_demo_package
from mtrain.model import (
    Action,
    Assembly,
    CoursePackage,
    Direction,
    Part,
    Procedure,
    ProcedureStep,
)
from mtrain.package_io import serialize_package

INSTALL_PROC = "install-hydraulic-pump"
REMOVE_PROC = "remove-hydraulic-pump"


@pytest.fixture(scope="session")
def demo():
    return build_demo_package()


@pytest.fixture(scope="session")
def demo_pkg(demo) -> CoursePackage:
    return demo[0]


@pytest.fixture(scope="session")
def demo_root(demo, tmp_path_factory):
    pkg, assets = demo
    root = tmp_path_factory.mktemp("courseware") / pkg.course_id
    serialize_package(pkg, root, asset_contents=assets)
    return root


def tiny_package(n_parts: int = 3, direction: Direction = Direction.INSTALLATION) -> CoursePackage:
    """Minimal n-part package with one procedure touching every part in order."""
    parts = tuple(
        Part(f"P{i + 1}", f"Piece {i + 1}", f"meshes/p{i + 1}.glb") for i in range(n_parts)
    )
    action = Action.INSTALL if direction is Direction.INSTALLATION else Action.REMOVE
    steps = tuple(
        ProcedureStep(
            index=i,
            action=action,
            part_number=p.part_number,
            callout_text=f"Move {p.nomenclature}.",
        )
        for i, p in enumerate(parts)
    )
    proc = Procedure(procedure_id="tiny-proc", direction=direction, steps=steps)
    return CoursePackage(
        course_id="tiny",
        title="Tiny course",
        assembly=Assembly("tiny-asm", "Tiny assembly", parts),
        procedures=(proc,),
        asset_index=frozenset(p.mesh_ref for p in parts),
    )


@pytest.fixture
def tiny_pkg() -> CoursePackage:
    return tiny_package()


@pytest.fixture
def tiny_proc(tiny_pkg) -> Procedure:
    return tiny_pkg.procedures[0]
