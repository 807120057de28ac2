"""Built-in demo package: a five-part hydraulic pump with install and remove
procedures.

Meshes are generated as small but fully valid binary glTF boxes so the browser
client can render the assembly without any external authoring tools; narration
clips are placeholders (voice recording is out of scope).
"""

from __future__ import annotations

import json
import struct
import sys
from pathlib import Path

from .model import (
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
from .package_io import serialize_package

DEMO_COURSE_ID = "hydraulic-pump"

_GLB_MAGIC = 0x46546C67
_CHUNK_JSON = 0x4E4F534A
_CHUNK_BIN = 0x004E4942


def box_glb(half_extents: tuple[float, float, float], color: tuple[float, float, float]) -> bytes:
    """A valid GLB containing one box mesh with per-face normals."""
    hx, hy, hz = half_extents
    faces = [
        ((1, 0, 0), [(hx, -hy, -hz), (hx, hy, -hz), (hx, hy, hz), (hx, -hy, hz)]),
        ((-1, 0, 0), [(-hx, -hy, hz), (-hx, hy, hz), (-hx, hy, -hz), (-hx, -hy, -hz)]),
        ((0, 1, 0), [(-hx, hy, -hz), (-hx, hy, hz), (hx, hy, hz), (hx, hy, -hz)]),
        ((0, -1, 0), [(-hx, -hy, hz), (-hx, -hy, -hz), (hx, -hy, -hz), (hx, -hy, hz)]),
        ((0, 0, 1), [(-hx, -hy, hz), (hx, -hy, hz), (hx, hy, hz), (-hx, hy, hz)]),
        ((0, 0, -1), [(hx, -hy, -hz), (-hx, -hy, -hz), (-hx, hy, -hz), (hx, hy, -hz)]),
    ]
    positions: list[tuple[float, float, float]] = []
    normals: list[tuple[float, float, float]] = []
    indices: list[int] = []
    for normal, corners in faces:
        base = len(positions)
        positions.extend(corners)
        normals.extend([normal] * 4)
        indices.extend([base, base + 1, base + 2, base, base + 2, base + 3])

    pos_bytes = b"".join(struct.pack("<3f", *p) for p in positions)
    norm_bytes = b"".join(struct.pack("<3f", *n) for n in normals)
    idx_bytes = b"".join(struct.pack("<H", i) for i in indices)
    bin_chunk = pos_bytes + norm_bytes + idx_bytes
    bin_chunk += b"\x00" * (-len(bin_chunk) % 4)

    gltf = {
        "asset": {"version": "2.0", "generator": "mtrain demo"},
        "scene": 0,
        "scenes": [{"nodes": [0]}],
        "nodes": [{"mesh": 0}],
        "meshes": [
            {
                "primitives": [
                    {"attributes": {"POSITION": 0, "NORMAL": 1}, "indices": 2, "material": 0}
                ]
            }
        ],
        "materials": [
            {
                "pbrMetallicRoughness": {
                    "baseColorFactor": [*color, 1.0],
                    "metallicFactor": 0.3,
                    "roughnessFactor": 0.6,
                }
            }
        ],
        "buffers": [{"byteLength": len(bin_chunk)}],
        "bufferViews": [
            {"buffer": 0, "byteOffset": 0, "byteLength": len(pos_bytes), "target": 34962},
            {
                "buffer": 0,
                "byteOffset": len(pos_bytes),
                "byteLength": len(norm_bytes),
                "target": 34962,
            },
            {
                "buffer": 0,
                "byteOffset": len(pos_bytes) + len(norm_bytes),
                "byteLength": len(idx_bytes),
                "target": 34963,
            },
        ],
        "accessors": [
            {
                "bufferView": 0,
                "componentType": 5126,
                "count": len(positions),
                "type": "VEC3",
                "min": [-hx, -hy, -hz],
                "max": [hx, hy, hz],
            },
            {"bufferView": 1, "componentType": 5126, "count": len(normals), "type": "VEC3"},
            {"bufferView": 2, "componentType": 5123, "count": len(indices), "type": "SCALAR"},
        ],
    }
    json_chunk = json.dumps(gltf, separators=(",", ":")).encode("utf-8")
    json_chunk += b" " * (-len(json_chunk) % 4)
    total = 12 + 8 + len(json_chunk) + 8 + len(bin_chunk)
    return b"".join(
        [
            struct.pack("<3I", _GLB_MAGIC, 2, total),
            struct.pack("<2I", len(json_chunk), _CHUNK_JSON),
            json_chunk,
            struct.pack("<2I", len(bin_chunk), _CHUNK_BIN),
            bin_chunk,
        ]
    )


_PARTS = [
    # (number, nomenclature, position, box half-extents, color)
    ("HP-101", "Pump Housing", (0.0, 0.0, 0.0), (0.22, 0.16, 0.16), (0.55, 0.57, 0.60)),
    ("HP-102", "Drive Shaft", (0.0, 0.0, 0.24), (0.04, 0.04, 0.10), (0.75, 0.71, 0.40)),
    ("HP-103", "Impeller", (0.0, 0.0, 0.40), (0.12, 0.12, 0.05), (0.72, 0.45, 0.20)),
    ("HP-104", "Shaft Seal", (0.0, 0.0, 0.52), (0.08, 0.08, 0.02), (0.25, 0.55, 0.35)),
    ("HP-105", "Cover Plate", (0.0, 0.0, 0.60), (0.18, 0.14, 0.03), (0.35, 0.45, 0.70)),
]

_STEP_DETAILS = [
    # (tool, torque, callout, notices)
    (
        None,
        None,
        "Seat the pump housing on the mounting studs.",
        (
            SafetyNotice(
                NoticeKind.WARNING,
                "Verify the hydraulic system is depressurized before touching the pump.",
            ),
        ),
    ),
    (
        "T-10",
        18.0,
        "Slide the drive shaft into the housing bore and torque the retainer.",
        (),
    ),
    (
        "T-10",
        12.0,
        "Mount the impeller on the drive shaft splines.",
        (SafetyNotice(NoticeKind.CAUTION, "Impeller vanes bend under side load."),),
    ),
    (
        None,
        None,
        "Press the shaft seal squarely into its recess.",
        (
            SafetyNotice(
                NoticeKind.CAUTION,
                "A rolled seal lip causes leaks; never reuse a removed seal.",
            ),
        ),
    ),
    (
        "T-22",
        24.0,
        "Fit the cover plate and torque the bolts in a cross pattern.",
        (
            SafetyNotice(
                NoticeKind.WARNING, "Pinch point between cover plate and housing flange."
            ),
            SafetyNotice(NoticeKind.CAUTION, "Overtorquing the cover bolts cracks the casting."),
        ),
    ),
]

_REMOVAL_CALLOUTS = {
    "HP-101": "Lift the pump housing off the mounting studs.",
    "HP-102": "Withdraw the drive shaft from the housing bore.",
    "HP-103": "Pull the impeller off the drive shaft splines.",
    "HP-104": "Ease the shaft seal out of its recess; discard it.",
    "HP-105": "Back the cover bolts off in a cross pattern and free the cover plate.",
}

_STAGING_OFFSET = (0.9, 0.0, 0.0)


def _animation_track(part: Part, direction: Direction) -> bytes:
    px, py, pz = part.default_transform.position
    sx, sy, sz = _STAGING_OFFSET
    staged = [px + sx, py + sy, pz + sz]
    seated = [px, py, pz]
    rotation = list(part.default_transform.rotation)
    start, end = (staged, seated) if direction is Direction.INSTALLATION else (seated, staged)
    track = [
        {"time_s": 0.0, "part_number": part.part_number, "position": start, "rotation": rotation},
        {"time_s": 0.4, "part_number": part.part_number, "position": start, "rotation": rotation},
        {"time_s": 2.0, "part_number": part.part_number, "position": end, "rotation": rotation},
    ]
    return json.dumps(track, indent=1).encode("utf-8")


def build_demo_package() -> tuple[CoursePackage, dict[str, bytes]]:
    """The hydraulic-pump course plus the bytes of every asset it references."""
    parts = tuple(
        Part(
            part_number=num,
            nomenclature=nom,
            mesh_ref=f"meshes/{num.lower()}.glb",
            default_transform=Pose(position=pos),
        )
        for num, nom, pos, _, _ in _PARTS
    )
    assembly = Assembly(assembly_id="hydraulic-pump-asm", name="Hydraulic Pump", parts=parts)

    assets: dict[str, bytes] = {}
    for (num, _, _, half, color), part in zip(_PARTS, parts):
        assets[part.mesh_ref] = box_glb(half, color)

    def make_steps(direction: Direction) -> tuple[ProcedureStep, ...]:
        action = Action.INSTALL if direction is Direction.INSTALLATION else Action.REMOVE
        ordered = (
            list(enumerate(parts))
            if direction is Direction.INSTALLATION
            else list(enumerate(reversed(parts)))
        )
        tag = "install" if direction is Direction.INSTALLATION else "remove"
        detail_by_part = {entry[0]: detail for entry, detail in zip(_PARTS, _STEP_DETAILS)}
        steps = []
        for index, part in ordered:
            tool, torque, callout, notices = detail_by_part[part.part_number]
            if direction is Direction.REMOVAL:
                callout = _REMOVAL_CALLOUTS[part.part_number]
            animation_ref = f"animations/{tag}-step-{index}.json"
            narration_ref = f"audio/{tag}-step-{index}.ogg"
            assets[animation_ref] = _animation_track(part, direction)
            assets[narration_ref] = b"OggS" + b"\x00" * 28  # placeholder clip
            steps.append(
                ProcedureStep(
                    index=index,
                    action=action,
                    part_number=part.part_number,
                    callout_text=callout,
                    tool=tool,
                    torque=torque,
                    notices=notices,
                    animation_ref=animation_ref,
                    narration_ref=narration_ref,
                )
            )
        return tuple(steps)

    install = Procedure(
        procedure_id="install-hydraulic-pump",
        direction=Direction.INSTALLATION,
        steps=make_steps(Direction.INSTALLATION),
        pre_steps=(
            "Depressurize the hydraulic system and tag the supply breaker.",
            "Drain residual fluid into a bonded container.",
        ),
        post_steps=(
            "Refill with approved hydraulic fluid.",
            "Run a low-pressure leak check before returning to service.",
        ),
        required_tools=("T-10", "T-22", "T-7"),
        consumables=("Hydraulic fluid MIL-PRF-83282", "Thread locker"),
        spares=("Seal kit HP-SK-4",),
    )
    removal = Procedure(
        procedure_id="remove-hydraulic-pump",
        direction=Direction.REMOVAL,
        steps=make_steps(Direction.REMOVAL),
        pre_steps=("Depressurize the hydraulic system and tag the supply breaker.",),
        post_steps=("Cap open ports against contamination.",),
        required_tools=("T-10", "T-22"),
        consumables=("Lint-free wipes",),
        spares=(),
    )

    pkg = CoursePackage(
        course_id=DEMO_COURSE_ID,
        title="Hydraulic Pump Removal and Installation",
        assembly=assembly,
        procedures=(removal, install),
        asset_index=frozenset(assets),
        dim_opacity=0.2,
    )
    return pkg, assets


def write_demo_package(root: str | Path) -> Path:
    pkg, assets = build_demo_package()
    return serialize_package(pkg, Path(root) / pkg.course_id, asset_contents=assets)


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("courseware")
    written = write_demo_package(target)
    print(f"demo package written to {written}")
