"""Seeded random courseware packages and single-fault injectors for tests."""

from __future__ import annotations

import random
from dataclasses import replace

from mtrain.model import (
    Action,
    Assembly,
    CoursePackage,
    Direction,
    NoticeKind,
    Part,
    Pose,
    Procedure,
    ProcedureStep,
    SafetyNotice,
)

_TOOL_POOL = ("T-7", "T-10", "T-22", "T-42")
_NOTICE_TEXTS = (
    (NoticeKind.WARNING, "High pressure line nearby."),
    (NoticeKind.WARNING, "Sharp edges on the flange."),
    (NoticeKind.CAUTION, "Do not side-load the bearing."),
    (NoticeKind.CAUTION, "Keep mating faces free of grit."),
)


def gen_package(rng: random.Random, max_parts: int = 6) -> CoursePackage:
    """A structurally valid package with no validation errors (warnings allowed)."""
    n_parts = rng.randint(1, max_parts)
    parts = tuple(
        Part(
            part_number=f"P-{i + 1:02d}",
            nomenclature=f"Component {i + 1}",
            mesh_ref=f"meshes/p{i + 1}.glb",
            default_transform=Pose(
                position=(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
            ),
        )
        for i in range(n_parts)
    )
    assets = {p.mesh_ref for p in parts}

    procedures = []
    for j in range(rng.randint(1, 2)):
        direction = rng.choice((Direction.INSTALLATION, Direction.REMOVAL))
        action = Action.INSTALL if direction is Direction.INSTALLATION else Action.REMOVE
        chosen = rng.sample(parts, rng.randint(1, n_parts))
        used_tools: list[str] = []
        steps = []
        for idx, part in enumerate(chosen):
            tool = rng.choice(_TOOL_POOL) if rng.random() < 0.6 else None
            if tool and tool not in used_tools:
                used_tools.append(tool)
            torque = round(rng.uniform(4.0, 40.0), 1) if tool and rng.random() < 0.7 else None
            notices = tuple(
                SafetyNotice(*rng.choice(_NOTICE_TEXTS))
                for _ in range(rng.randint(0, 2))
            )
            animation_ref = f"animations/j{j}s{idx}.json" if rng.random() < 0.8 else None
            narration_ref = f"audio/j{j}s{idx}.ogg" if rng.random() < 0.8 else None
            assets.update(r for r in (animation_ref, narration_ref) if r)
            steps.append(
                ProcedureStep(
                    index=idx,
                    action=action,
                    part_number=part.part_number,
                    callout_text=(
                        f"Handle {part.nomenclature} carefully."
                        if rng.random() < 0.9
                        else ""
                    ),
                    tool=tool,
                    torque=torque,
                    notices=notices,
                    animation_ref=animation_ref,
                    narration_ref=narration_ref,
                )
            )
        extra_tools = [t for t in _TOOL_POOL if t not in used_tools and rng.random() < 0.3]
        procedures.append(
            Procedure(
                procedure_id=f"proc-{j}",
                direction=direction,
                steps=tuple(steps),
                pre_steps=tuple(
                    f"Preparation item {k + 1}." for k in range(rng.randint(0, 2))
                ),
                post_steps=tuple(
                    f"Follow-up item {k + 1}." for k in range(rng.randint(0, 2))
                ),
                required_tools=tuple(used_tools + extra_tools),
                consumables=tuple(
                    rng.sample(("Grease", "Wipes", "Sealant"), rng.randint(0, 2))
                ),
                spares=tuple(rng.sample(("O-ring kit", "Shims"), rng.randint(0, 1))),
            )
        )
    if rng.random() < 0.3:
        assets.add("meshes/unreferenced-bracket.glb")
    return CoursePackage(
        course_id=f"gen-{rng.randrange(10 ** 8):08d}",
        title="Generated course",
        assembly=Assembly(assembly_id="gen-asm", name="Generated assembly", parts=parts),
        procedures=tuple(procedures),
        asset_index=frozenset(assets),
        dim_opacity=round(rng.uniform(0.05, 0.9), 3),
    )


def _with_first_step(pkg: CoursePackage, **changes) -> CoursePackage:
    proc = pkg.procedures[0]
    steps = (replace(proc.steps[0], **changes),) + proc.steps[1:]
    return replace(pkg, procedures=(replace(proc, steps=steps),) + pkg.procedures[1:])


def inject_fault(pkg: CoursePackage, rule_id: str) -> CoursePackage:
    """Return a copy of pkg violating exactly the given validator rule."""
    if rule_id == "V-1":
        dup = replace(pkg.assembly.parts[0], nomenclature="Duplicate label")
        assembly = replace(pkg.assembly, parts=pkg.assembly.parts + (dup,))
        return replace(pkg, assembly=assembly)
    if rule_id == "V-2":
        return _with_first_step(pkg, part_number="GHOST-99")
    if rule_id == "V-3":
        step = pkg.procedures[0].steps[0]
        flipped = Action.REMOVE if step.action is Action.INSTALL else Action.INSTALL
        return _with_first_step(pkg, action=flipped)
    if rule_id == "V-4":
        return _with_first_step(pkg, tool="T-UNDECLARED")
    if rule_id == "V-5":
        part = replace(pkg.assembly.parts[0], mesh_ref="meshes/ghost.glb")
        assembly = replace(pkg.assembly, parts=(part,) + pkg.assembly.parts[1:])
        return replace(pkg, assembly=assembly)
    if rule_id == "V-6":
        return _with_first_step(pkg, tool=None, torque=9.9)
    if rule_id == "V-9":
        proc = pkg.procedures[0]
        if len(proc.steps) < 2:
            raise ValueError("V-9 needs a procedure with at least two steps")
        return _with_first_step(pkg, part_number=proc.steps[1].part_number)
    raise ValueError(f"no injector for {rule_id}")
