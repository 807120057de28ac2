"""Courseware domain model.

Every type here is an immutable value: construction never does cross-reference
checking (that is the validator's job), so a package parsed from disk can carry
referential faults and still be represented, reported on, and rejected cleanly.
Local shape rules (non-empty identifiers, torque > 0, opacity range) are
enforced at the parse/serialize boundary, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

DEFAULT_DIM_OPACITY = 0.2


class Direction(str, Enum):
    REMOVAL = "REMOVAL"
    INSTALLATION = "INSTALLATION"


class Action(str, Enum):
    INSTALL = "INSTALL"
    REMOVE = "REMOVE"

    @property
    def direction(self) -> Direction:
        return Direction.INSTALLATION if self is Action.INSTALL else Direction.REMOVAL


class NoticeKind(str, Enum):
    # WARNING covers hazards to personnel; CAUTION covers damage to material
    # only. The distinction is an authoring convention, not checked by code.
    WARNING = "WARNING"
    CAUTION = "CAUTION"


@dataclass(frozen=True)
class Pose:
    """Position in meters plus an xyzw rotation quaternion."""

    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rotation: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)


IDENTITY_POSE = Pose()


@dataclass(frozen=True)
class Part:
    part_number: str
    nomenclature: str
    mesh_ref: str
    default_transform: Pose = IDENTITY_POSE


@dataclass(frozen=True)
class Assembly:
    assembly_id: str
    name: str
    parts: tuple[Part, ...]

    def part(self, part_number: str) -> Part | None:
        for p in self.parts:
            if p.part_number == part_number:
                return p
        return None

    @property
    def part_numbers(self) -> tuple[str, ...]:
        return tuple(p.part_number for p in self.parts)


@dataclass(frozen=True)
class SafetyNotice:
    kind: NoticeKind
    text: str


@dataclass(frozen=True)
class ProcedureStep:
    index: int
    action: Action
    part_number: str
    callout_text: str
    tool: str | None = None
    torque: float | None = None  # newton-meters, > 0 when present
    notices: tuple[SafetyNotice, ...] = ()
    animation_ref: str | None = None
    narration_ref: str | None = None


@dataclass(frozen=True)
class Procedure:
    procedure_id: str
    direction: Direction
    steps: tuple[ProcedureStep, ...]
    pre_steps: tuple[str, ...] = ()
    post_steps: tuple[str, ...] = ()
    required_tools: tuple[str, ...] = ()
    consumables: tuple[str, ...] = ()
    spares: tuple[str, ...] = ()

    @property
    def step_parts(self) -> tuple[str, ...]:
        return tuple(s.part_number for s in self.steps)


@dataclass(frozen=True)
class CoursePackage:
    course_id: str
    title: str
    assembly: Assembly
    procedures: tuple[Procedure, ...]
    asset_index: frozenset[str] = frozenset()
    dim_opacity: float = DEFAULT_DIM_OPACITY

    def procedure(self, procedure_id: str) -> Procedure | None:
        for proc in self.procedures:
            if proc.procedure_id == procedure_id:
                return proc
        return None


@dataclass(frozen=True)
class Finding:
    """One validator hit: rule id, where it was found, and a human message."""

    rule_id: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def rule_ids(self) -> frozenset[str]:
        return frozenset(f.rule_id for f in self.errors + self.warnings)

    def render(self) -> str:
        lines = []
        for f in self.errors:
            lines.append(f"error   {f.rule_id}  {f.location}: {f.message}")
        for f in self.warnings:
            lines.append(f"warning {f.rule_id}  {f.location}: {f.message}")
        if not lines:
            lines.append("package is valid")
        return "\n".join(lines)


@dataclass(frozen=True)
class ResourceSummary:
    """Everything a technician must stage before starting a procedure."""

    tools: tuple[str, ...]
    consumables: tuple[str, ...]
    spares: tuple[str, ...]
