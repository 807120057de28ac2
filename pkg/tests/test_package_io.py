from __future__ import annotations

import json
import random
from dataclasses import replace

import pytest

from genpkg import gen_package
from mtrain.errors import (
    InvariantViolationError,
    MalformedManifestError,
    MissingManifestError,
    UnknownFieldError,
)
from mtrain.model import Direction
from mtrain.package_io import manifest_json, parse_package, serialize_package


def test_parse_demo_round_trip(demo, demo_root):
    pkg, _ = demo
    parsed = parse_package(demo_root)
    assert parsed == pkg
    assert parsed.assembly.assembly_id == "hydraulic-pump-asm"
    install = parsed.procedure("install-hydraulic-pump")
    assert install is not None
    assert install.direction is Direction.INSTALLATION
    assert len(install.steps) == 5


def test_missing_manifest(tmp_path):
    with pytest.raises(MissingManifestError):
        parse_package(tmp_path)


def test_duplicated_key_is_malformed(tmp_path, demo_root):
    text = (demo_root / "manifest.json").read_text(encoding="utf-8")
    # graft a duplicate of the course_id key into the top-level object
    broken = text.replace('"course_id"', '"title": "x", "course_id"', 1)
    (tmp_path / "manifest.json").write_text(broken, encoding="utf-8")
    with pytest.raises(MalformedManifestError, match="duplicated key"):
        parse_package(tmp_path)


def test_invalid_json_reports_line(tmp_path):
    (tmp_path / "manifest.json").write_text('{\n  "course_id": \n}', encoding="utf-8")
    with pytest.raises(MalformedManifestError) as excinfo:
        parse_package(tmp_path)
    assert excinfo.value.line is not None


def _write_manifest(tmp_path, mutate):
    pkg, assets = (gen_package(random.Random(5)), None)
    data = manifest_json(pkg)
    mutate(data)
    (tmp_path / "manifest.json").write_text(json.dumps(data), encoding="utf-8")
    return tmp_path


def test_unknown_top_level_field(tmp_path):
    root = _write_manifest(tmp_path, lambda d: d.update(publisher="acme"))
    with pytest.raises(UnknownFieldError, match="publisher"):
        parse_package(root)


def test_unknown_nested_field_has_path(tmp_path):
    def mutate(d):
        d["assembly"]["parts"][0]["color"] = "red"

    with pytest.raises(UnknownFieldError) as excinfo:
        parse_package(_write_manifest(tmp_path, mutate))
    assert excinfo.value.path == "assembly.parts[0].color"


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.pop("course_id"), "missing field 'course_id'"),
        (lambda d: d.update(dim_opacity=1.2), "dim_opacity"),
        (lambda d: d.update(dim_opacity="dark"), "expected a number"),
        (lambda d: d["procedures"].clear(), "at least one procedure"),
        (lambda d: d["assembly"]["parts"].clear(), "at least one part"),
        (lambda d: d["assembly"]["parts"][0].update(part_number=""), "must not be empty"),
        (
            lambda d: d["procedures"][0]["steps"][0].update(torque=-3),
            "must be > 0",
        ),
        (
            lambda d: d["procedures"][0].update(direction="SIDEWAYS"),
            "not one of",
        ),
        (
            lambda d: d["procedures"][0]["steps"][0].update(index=7),
            "without gaps",
        ),
        (
            lambda d: d["assembly"]["parts"][0].update(mesh_ref="textures/p.png"),
            "asset path",
        ),
    ],
)
def test_malformed_manifest_shapes(tmp_path, mutate, message):
    def ensure_tool(d):
        # give step 0 a tool so a torque mutation cannot be masked
        step = d["procedures"][0]["steps"][0]
        step.setdefault("tool", "T-10")

    def both(d):
        ensure_tool(d)
        mutate(d)

    with pytest.raises(MalformedManifestError, match=message):
        parse_package(_write_manifest(tmp_path, both))


def test_dim_opacity_defaults_when_absent(tmp_path):
    root = _write_manifest(tmp_path, lambda d: d.pop("dim_opacity"))
    assert parse_package(root).dim_opacity == 0.2


def test_dim_opacity_pass_through(tmp_path):
    pkg = replace(gen_package(random.Random(1)), dim_opacity=0.35)
    serialize_package(pkg, tmp_path / "p")
    assert parse_package(tmp_path / "p").dim_opacity == 0.35


def test_serialize_refuses_zero_procedures(tmp_path, demo_pkg):
    broken = replace(demo_pkg, procedures=())
    with pytest.raises(InvariantViolationError, match="at least one procedure"):
        serialize_package(broken, tmp_path / "broken")


def test_serialize_refuses_foreign_asset_paths(tmp_path, demo_pkg):
    broken = replace(demo_pkg, asset_index=demo_pkg.asset_index | {"textures/skin.png"})
    with pytest.raises(InvariantViolationError, match="does not fit the package layout"):
        serialize_package(broken, tmp_path / "broken")


def test_unindexed_files_are_ignored(tmp_path, demo):
    pkg, assets = demo
    root = serialize_package(pkg, tmp_path / "pkg", asset_contents=assets)
    (root / "README.txt").write_text("notes", encoding="utf-8")
    (root / "meshes" / "sketch.txt").write_text("not a mesh", encoding="utf-8")
    assert parse_package(root) == pkg


def test_round_trip_generated_packages(tmp_path):
    rng = random.Random(2024)
    for i in range(50):
        pkg = gen_package(rng)
        root = serialize_package(pkg, tmp_path / f"pkg{i}")
        assert parse_package(root) == pkg, f"round-trip drift on sample {i}"
