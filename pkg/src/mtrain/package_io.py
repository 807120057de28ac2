"""Reading and writing courseware packages.

On-disk layout:

    <root>/manifest.json        course metadata, assembly, procedures
    <root>/meshes/*.glb         binary glTF, referenced by mesh_ref
    <root>/audio/*.ogg          narration clips, referenced by narration_ref
    <root>/animations/*.json    keyframe tracks, referenced by animation_ref

Parsing is strict and syntax-only: unknown fields and duplicated keys are
errors, local shape rules (identifier non-empty, torque > 0, contiguous step
indices) are enforced, but referential integrity (dangling part or asset refs,
duplicate part numbers, ...) is left to the validator so faulty packages can
still be loaded and reported on.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Iterator, Mapping

from .errors import (
    InvariantViolationError,
    MalformedManifestError,
    MissingManifestError,
    UnknownFieldError,
)
from .model import (
    DEFAULT_DIM_OPACITY,
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

MANIFEST_NAME = "manifest.json"

_ASSET_PATTERNS = {
    "meshes": "*.glb",
    "audio": "*.ogg",
    "animations": "*.json",
}
_MESH_REF_RE = re.compile(r"^meshes/[^/]+\.glb$")
_AUDIO_REF_RE = re.compile(r"^audio/[^/]+\.ogg$")
_ANIMATION_REF_RE = re.compile(r"^animations/[^/]+\.json$")


def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise MalformedManifestError(f"duplicated key {key!r}")
        out[key] = value
    return out


class _Obj:
    """One manifest JSON object; tracks its path and rejects unknown keys."""

    def __init__(self, data: Any, path: str):
        if not isinstance(data, dict):
            raise MalformedManifestError(f"{path}: expected an object")
        self.data = data
        self.path = path

    def check_keys(self, allowed: set[str]) -> None:
        for key in self.data:
            if key not in allowed:
                raise UnknownFieldError(f"{self.path}.{key}" if self.path else key)

    def _get(self, key: str, required: bool) -> Any:
        if key not in self.data or self.data[key] is None:
            if required:
                raise MalformedManifestError(f"{self.path or 'manifest'}: missing field {key!r}")
            return None
        return self.data[key]

    def sub(self, key: str) -> "_Obj":
        return _Obj(self._get(key, True), self._key_path(key))

    def string(self, key: str, required: bool = True, non_empty: bool = True) -> str | None:
        value = self._get(key, required)
        if value is None:
            return None
        if not isinstance(value, str):
            raise MalformedManifestError(f"{self._key_path(key)}: expected a string")
        if non_empty and not value:
            raise MalformedManifestError(f"{self._key_path(key)}: must not be empty")
        return value

    def number(self, key: str, required: bool = True) -> float | None:
        value = self._get(key, required)
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise MalformedManifestError(f"{self._key_path(key)}: expected a number")
        return float(value)

    def integer(self, key: str) -> int:
        value = self._get(key, True)
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedManifestError(f"{self._key_path(key)}: expected an integer")
        return value

    def array(self, key: str) -> list[Any]:
        value = self._get(key, True)
        if value is None:
            return []
        if not isinstance(value, list):
            raise MalformedManifestError(f"{self._key_path(key)}: expected an array")
        return value

    def string_list(self, key: str) -> tuple[str, ...]:
        items = []
        for i, item in enumerate(self.array(key)):
            if not isinstance(item, str):
                raise MalformedManifestError(f"{self._key_path(key)}[{i}]: expected a string")
            items.append(item)
        return tuple(items)

    def objects(self, key: str) -> Iterator["_Obj"]:
        for i, item in enumerate(self.array(key)):
            yield _Obj(item, f"{self._key_path(key)}[{i}]")

    def enum(self, key: str, enum_cls: type) -> Any:
        value = self.string(key)
        try:
            return enum_cls(value)
        except ValueError:
            names = "/".join(m.value for m in enum_cls)
            raise MalformedManifestError(
                f"{self._key_path(key)}: {value!r} is not one of {names}"
            ) from None

    def _key_path(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key


def _float_triplet(obj: _Obj, key: str, size: int) -> tuple[float, ...]:
    raw = obj.array(key)
    if len(raw) != size:
        raise MalformedManifestError(f"{obj._key_path(key)}: expected {size} numbers")
    out = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise MalformedManifestError(f"{obj._key_path(key)}[{i}]: expected a number")
        out.append(float(v))
    return tuple(out)


def _parse_pose(obj: _Obj) -> Pose:
    obj.check_keys({"position", "rotation"})
    return Pose(
        position=_float_triplet(obj, "position", 3),
        rotation=_float_triplet(obj, "rotation", 4),
    )


def _checked_ref(path: str, value: str | None, pattern: re.Pattern, kind: str) -> str | None:
    if value is not None and not pattern.match(value):
        raise MalformedManifestError(f"{path}: {value!r} is not a {kind} asset path")
    return value


def _parse_part(obj: _Obj) -> Part:
    obj.check_keys({"part_number", "nomenclature", "mesh_ref", "default_transform"})
    mesh_ref = obj.string("mesh_ref")
    _checked_ref(f"{obj.path}.mesh_ref", mesh_ref, _MESH_REF_RE, "meshes/*.glb")
    return Part(
        part_number=obj.string("part_number"),
        nomenclature=obj.string("nomenclature", non_empty=False),
        mesh_ref=mesh_ref,
        default_transform=_parse_pose(obj.sub("default_transform")),
    )


def _parse_notice(obj: _Obj) -> SafetyNotice:
    obj.check_keys({"kind", "text"})
    return SafetyNotice(kind=obj.enum("kind", NoticeKind), text=obj.string("text"))


def _parse_step(obj: _Obj, position: int) -> ProcedureStep:
    obj.check_keys(
        {
            "index",
            "action",
            "part_number",
            "tool",
            "torque",
            "callout_text",
            "notices",
            "animation_ref",
            "narration_ref",
        }
    )
    index = obj.integer("index")
    if index != position:
        raise MalformedManifestError(
            f"{obj.path}.index: step indices must run 0..N-1 without gaps "
            f"(found {index} at position {position})"
        )
    torque = obj.number("torque", required=False)
    if torque is not None and torque <= 0:
        raise MalformedManifestError(f"{obj.path}.torque: must be > 0 newton-meters")
    animation_ref = obj.string("animation_ref", required=False)
    narration_ref = obj.string("narration_ref", required=False)
    _checked_ref(f"{obj.path}.animation_ref", animation_ref, _ANIMATION_REF_RE, "animations/*.json")
    _checked_ref(f"{obj.path}.narration_ref", narration_ref, _AUDIO_REF_RE, "audio/*.ogg")
    return ProcedureStep(
        index=index,
        action=obj.enum("action", Action),
        part_number=obj.string("part_number"),
        callout_text=obj.string("callout_text", non_empty=False),
        tool=obj.string("tool", required=False),
        torque=torque,
        notices=tuple(_parse_notice(o) for o in obj.objects("notices")),
        animation_ref=animation_ref,
        narration_ref=narration_ref,
    )


def _parse_procedure(obj: _Obj) -> Procedure:
    obj.check_keys(
        {
            "procedure_id",
            "direction",
            "pre_steps",
            "post_steps",
            "required_tools",
            "consumables",
            "spares",
            "steps",
        }
    )
    steps = tuple(_parse_step(o, i) for i, o in enumerate(obj.objects("steps")))
    return Procedure(
        procedure_id=obj.string("procedure_id"),
        direction=obj.enum("direction", Direction),
        steps=steps,
        pre_steps=obj.string_list("pre_steps"),
        post_steps=obj.string_list("post_steps"),
        required_tools=obj.string_list("required_tools"),
        consumables=obj.string_list("consumables"),
        spares=obj.string_list("spares"),
    )


def _parse_assembly(obj: _Obj) -> Assembly:
    obj.check_keys({"assembly_id", "name", "parts"})
    parts = tuple(_parse_part(o) for o in obj.objects("parts"))
    if not parts:
        raise MalformedManifestError(f"{obj.path}.parts: an assembly needs at least one part")
    return Assembly(
        assembly_id=obj.string("assembly_id"),
        name=obj.string("name", non_empty=False),
        parts=parts,
    )


def _scan_assets(root: Path) -> frozenset[str]:
    found = set()
    for subdir, pattern in _ASSET_PATTERNS.items():
        base = root / subdir
        if base.is_dir():
            for f in sorted(base.glob(pattern)):
                if f.is_file():
                    found.add(f"{subdir}/{f.name}")
    return frozenset(found)


def parse_package(root: str | Path) -> CoursePackage:
    """Load a courseware package from a directory.

    Raises MissingManifestError, MalformedManifestError or UnknownFieldError;
    referential problems are intentionally not detected here (see
    validation.validate_package).
    """
    root = Path(root)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingManifestError(str(root))
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedManifestError(f"manifest is not UTF-8: {exc}") from exc
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise MalformedManifestError(exc.msg, line=exc.lineno) from exc

    top = _Obj(data, "")
    top.check_keys({"course_id", "title", "dim_opacity", "assembly", "procedures"})
    dim = top.number("dim_opacity", required=False)
    if dim is None:
        dim = DEFAULT_DIM_OPACITY
    if not 0 < dim < 1:
        raise MalformedManifestError("dim_opacity: must lie strictly between 0 and 1")
    procedures = tuple(_parse_procedure(o) for o in top.objects("procedures"))
    if not procedures:
        raise MalformedManifestError("procedures: a package needs at least one procedure")
    return CoursePackage(
        course_id=top.string("course_id"),
        title=top.string("title", non_empty=False),
        assembly=_parse_assembly(top.sub("assembly")),
        procedures=procedures,
        asset_index=_scan_assets(root),
        dim_opacity=dim,
    )


# --- serialization ---

def _pose_to_json(pose: Pose) -> dict[str, Any]:
    return {"position": list(pose.position), "rotation": list(pose.rotation)}


def _part_to_json(part: Part) -> dict[str, Any]:
    return {
        "part_number": part.part_number,
        "nomenclature": part.nomenclature,
        "mesh_ref": part.mesh_ref,
        "default_transform": _pose_to_json(part.default_transform),
    }


def _step_to_json(step: ProcedureStep) -> dict[str, Any]:
    out: dict[str, Any] = {
        "index": step.index,
        "action": step.action.value,
        "part_number": step.part_number,
        "callout_text": step.callout_text,
        "notices": [{"kind": n.kind.value, "text": n.text} for n in step.notices],
    }
    if step.tool is not None:
        out["tool"] = step.tool
    if step.torque is not None:
        out["torque"] = step.torque
    if step.animation_ref is not None:
        out["animation_ref"] = step.animation_ref
    if step.narration_ref is not None:
        out["narration_ref"] = step.narration_ref
    return out


def _procedure_to_json(proc: Procedure) -> dict[str, Any]:
    return {
        "procedure_id": proc.procedure_id,
        "direction": proc.direction.value,
        "pre_steps": list(proc.pre_steps),
        "post_steps": list(proc.post_steps),
        "required_tools": list(proc.required_tools),
        "consumables": list(proc.consumables),
        "spares": list(proc.spares),
        "steps": [_step_to_json(s) for s in proc.steps],
    }


def manifest_json(pkg: CoursePackage) -> dict[str, Any]:
    """The manifest object exactly as written to manifest.json."""
    return {
        "course_id": pkg.course_id,
        "title": pkg.title,
        "dim_opacity": pkg.dim_opacity,
        "assembly": {
            "assembly_id": pkg.assembly.assembly_id,
            "name": pkg.assembly.name,
            "parts": [_part_to_json(p) for p in pkg.assembly.parts],
        },
        "procedures": [_procedure_to_json(p) for p in pkg.procedures],
    }


def _check_structure(pkg: CoursePackage) -> None:
    def bad(reason: str) -> InvariantViolationError:
        return InvariantViolationError(reason)

    if not pkg.procedures:
        raise bad("a package needs at least one procedure")
    if not pkg.assembly.parts:
        raise bad("an assembly needs at least one part")
    if not 0 < pkg.dim_opacity < 1:
        raise bad("dim_opacity must lie strictly between 0 and 1")
    if not pkg.course_id or not pkg.assembly.assembly_id:
        raise bad("identifiers must be non-empty")
    for part in pkg.assembly.parts:
        if not part.part_number:
            raise bad("part_number must be non-empty")
        if not _MESH_REF_RE.match(part.mesh_ref):
            raise bad(f"mesh_ref {part.mesh_ref!r} must look like meshes/*.glb")
    for proc in pkg.procedures:
        if not proc.procedure_id:
            raise bad("procedure_id must be non-empty")
        for position, step in enumerate(proc.steps):
            if step.index != position:
                raise bad(f"{proc.procedure_id}: step indices must run 0..N-1 without gaps")
            if step.torque is not None and step.torque <= 0:
                raise bad(f"{proc.procedure_id} step {step.index}: torque must be > 0")
            for notice in step.notices:
                if not notice.text:
                    raise bad(f"{proc.procedure_id} step {step.index}: empty safety notice")
            if step.animation_ref is not None and not _ANIMATION_REF_RE.match(step.animation_ref):
                raise bad(f"animation_ref {step.animation_ref!r} must look like animations/*.json")
            if step.narration_ref is not None and not _AUDIO_REF_RE.match(step.narration_ref):
                raise bad(f"narration_ref {step.narration_ref!r} must look like audio/*.ogg")
    for ref in pkg.asset_index:
        subdir, _, name = ref.partition("/")
        pattern = _ASSET_PATTERNS.get(subdir)
        if pattern is None or not name or "/" in name or not name.endswith(pattern[1:]):
            raise bad(f"asset path {ref!r} does not fit the package layout")


_STUB_CONTENT = {
    "meshes": b"glTF",  # placeholder bytes; real meshes come from authoring
    "audio": b"OggS",
    "animations": b"[]",
}


def serialize_package(
    pkg: CoursePackage,
    root: str | Path,
    asset_contents: Mapping[str, bytes] | None = None,
) -> Path:
    """Write pkg under root so that parse_package(root) reproduces it.

    Asset files listed in pkg.asset_index are created; bytes are taken from
    asset_contents when given, otherwise a format-tagged stub is written (the
    model does not carry asset payloads). Raises InvariantViolationError when
    pkg breaks a structural invariant.
    """
    _check_structure(pkg)
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    manifest = json.dumps(manifest_json(pkg), indent=2, ensure_ascii=False)
    (root / MANIFEST_NAME).write_text(manifest + "\n", encoding="utf-8")
    contents = asset_contents or {}
    for ref in sorted(pkg.asset_index):
        target = root / Path(ref)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(contents.get(ref, _STUB_CONTENT[ref.split("/", 1)[0]]))
    return root
