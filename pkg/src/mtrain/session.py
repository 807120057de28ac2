"""Session progress: linear module gating and the trainee event log.

The three modules unlock strictly in order (Part Familiarization, then
Procedure, then Practice); completed modules may be re-entered for review.
Every trainee action lands in an append-only, monotonically timestamped event
log, which later feeds the metrics. Activity events are gated too: the log can
never show practice activity before the procedure module was completed.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from typing import Any, Mapping

from .errors import (
    EvidenceInsufficientError,
    LockedError,
    MalformedLogError,
    NonMonotonicTimestampError,
    UnknownCourseError,
    UnknownProcedureError,
)
from .model import Assembly, CoursePackage
from .playback import PlaybackState, PlaybackStatus
from .practice import PracticeState


class ModuleId(IntEnum):
    """The three courseware modules, in their fixed unlock order."""

    FAMILIARIZATION = 0
    PROCEDURE = 1
    PRACTICE = 2


class EventKind(str, Enum):
    MODULE_ENTER = "MODULE_ENTER"
    MODULE_COMPLETE = "MODULE_COMPLETE"
    PART_SELECTED = "PART_SELECTED"
    STEP_VIEWED = "STEP_VIEWED"
    STEP_REPLAYED = "STEP_REPLAYED"
    ATTEMPT_ACCEPTED = "ATTEMPT_ACCEPTED"
    ATTEMPT_REJECTED = "ATTEMPT_REJECTED"
    ALERT_ACKNOWLEDGED = "ALERT_ACKNOWLEDGED"


# Which payload field each kind carries (None = no payload).
_PAYLOAD_FIELD: dict[EventKind, str | None] = {
    EventKind.MODULE_ENTER: "module",
    EventKind.MODULE_COMPLETE: "module",
    EventKind.PART_SELECTED: "part_number",
    EventKind.STEP_VIEWED: "step_index",
    EventKind.STEP_REPLAYED: "step_index",
    EventKind.ATTEMPT_ACCEPTED: "part_number",
    EventKind.ATTEMPT_REJECTED: "part_number",
    EventKind.ALERT_ACKNOWLEDGED: None,
}

# Module whose activity an event kind represents; gates record_event.
ACTIVITY_MODULE: dict[EventKind, ModuleId] = {
    EventKind.PART_SELECTED: ModuleId.FAMILIARIZATION,
    EventKind.STEP_VIEWED: ModuleId.PROCEDURE,
    EventKind.STEP_REPLAYED: ModuleId.PROCEDURE,
    EventKind.ATTEMPT_ACCEPTED: ModuleId.PRACTICE,
    EventKind.ATTEMPT_REJECTED: ModuleId.PRACTICE,
    EventKind.ALERT_ACKNOWLEDGED: ModuleId.PRACTICE,
}


@dataclass(frozen=True)
class SessionEvent:
    timestamp_ms: int
    kind: EventKind
    module: ModuleId | None = None
    step_index: int | None = None
    part_number: str | None = None

    def __post_init__(self):
        expected = _PAYLOAD_FIELD[self.kind]
        for name in ("module", "step_index", "part_number"):
            value = getattr(self, name)
            if name == expected:
                if value is None:
                    raise ValueError(f"{self.kind.value} event needs a {name} payload")
            elif value is not None:
                raise ValueError(f"{self.kind.value} event must not carry {name}")
        if self.timestamp_ms < 0:
            raise ValueError("timestamp_ms must be >= 0")


@dataclass(frozen=True)
class Session:
    session_id: str
    trainee_id: str
    course_id: str
    procedure_id: str
    completed: frozenset[ModuleId]
    entered: ModuleId | None
    event_log: tuple[SessionEvent, ...]

    @property
    def last_timestamp_ms(self) -> int:
        return self.event_log[-1].timestamp_ms if self.event_log else 0


def accessible(session: Session, module: ModuleId) -> bool:
    """A module is accessible once everything ordered before it is completed."""
    return all(m in session.completed for m in ModuleId if m < module)


def missing_prerequisite(session: Session, module: ModuleId) -> ModuleId | None:
    for m in ModuleId:
        if m < module and m not in session.completed:
            return m
    return None


def start_session(
    trainee_id: str,
    course_id: str,
    procedure_id: str,
    catalog: Mapping[str, CoursePackage],
    session_id: str | None = None,
) -> Session:
    """Open a session on one procedure; familiarization starts entered."""
    pkg = catalog.get(course_id)
    if pkg is None:
        raise UnknownCourseError(course_id)
    if pkg.procedure(procedure_id) is None:
        raise UnknownProcedureError(procedure_id)
    return Session(
        session_id=session_id or str(uuid.uuid4()),
        trainee_id=trainee_id,
        course_id=course_id,
        procedure_id=procedure_id,
        completed=frozenset(),
        entered=ModuleId.FAMILIARIZATION,
        event_log=(
            SessionEvent(0, EventKind.MODULE_ENTER, module=ModuleId.FAMILIARIZATION),
        ),
    )


def _append(session: Session, event: SessionEvent, **changes: Any) -> Session:
    if event.timestamp_ms < session.last_timestamp_ms:
        raise NonMonotonicTimestampError(event.timestamp_ms, session.last_timestamp_ms)
    return replace(session, event_log=session.event_log + (event,), **changes)


def enter_module(
    session: Session, module: ModuleId, timestamp_ms: int | None = None
) -> Session:
    """Enter a module; re-entering completed modules is allowed for review."""
    if not accessible(session, module):
        raise LockedError(module, missing_prerequisite(session, module))
    ts = session.last_timestamp_ms if timestamp_ms is None else timestamp_ms
    event = SessionEvent(ts, EventKind.MODULE_ENTER, module=module)
    return _append(session, event, entered=module)


def complete_module(
    session: Session, module: ModuleId, evidence: Any, timestamp_ms: int | None = None
) -> Session:
    """Mark the entered module complete if the evidence satisfies its rule.

    Completion rules: FAMILIARIZATION needs every assembly part selected at
    least once (evidence: the Assembly, judged against PART_SELECTED events);
    PROCEDURE needs a FINISHED PlaybackState; PRACTICE needs a complete
    PracticeState.
    """
    if session.entered is not module:
        raise LockedError(
            module,
            detail=f"module {module.name} is not the currently entered module",
        )
    _check_evidence(session, module, evidence)
    ts = session.last_timestamp_ms if timestamp_ms is None else timestamp_ms
    event = SessionEvent(ts, EventKind.MODULE_COMPLETE, module=module)
    return _append(session, event, completed=session.completed | {module})


def _check_evidence(session: Session, module: ModuleId, evidence: Any) -> None:
    if module is ModuleId.FAMILIARIZATION:
        if not isinstance(evidence, Assembly):
            raise EvidenceInsufficientError("familiarization evidence must be the Assembly")
        selected = {
            e.part_number
            for e in session.event_log
            if e.kind is EventKind.PART_SELECTED
        }
        never = [p for p in evidence.part_numbers if p not in selected]
        if never:
            raise EvidenceInsufficientError(
                f"parts never selected: {', '.join(never)}"
            )
    elif module is ModuleId.PROCEDURE:
        if not isinstance(evidence, PlaybackState):
            raise EvidenceInsufficientError("procedure evidence must be a PlaybackState")
        if evidence.procedure_id != session.procedure_id:
            raise EvidenceInsufficientError(
                f"playback is for procedure {evidence.procedure_id!r}"
            )
        if evidence.status is not PlaybackStatus.FINISHED:
            raise EvidenceInsufficientError(
                f"playback is {evidence.status.value}, not FINISHED"
            )
    else:
        if not isinstance(evidence, PracticeState):
            raise EvidenceInsufficientError("practice evidence must be a PracticeState")
        if evidence.procedure_id != session.procedure_id:
            raise EvidenceInsufficientError(
                f"practice is for procedure {evidence.procedure_id!r}"
            )
        if not evidence.complete:
            raise EvidenceInsufficientError(
                f"practice stopped after {evidence.expected_index} of "
                f"{len(evidence.all_parts)} steps"
            )


def record_event(session: Session, event: SessionEvent) -> Session:
    """Append one activity event; module enter/complete go through their ops."""
    if event.kind in (EventKind.MODULE_ENTER, EventKind.MODULE_COMPLETE):
        raise ValueError(
            f"{event.kind.value} events are recorded by enter_module/complete_module"
        )
    owner = ACTIVITY_MODULE[event.kind]
    if not accessible(session, owner):
        raise LockedError(owner, missing_prerequisite(session, owner))
    return _append(session, event)


# --- wire format ---

def event_to_json(event: SessionEvent) -> dict[str, Any]:
    out: dict[str, Any] = {"timestamp_ms": event.timestamp_ms, "kind": event.kind.value}
    field = _PAYLOAD_FIELD[event.kind]
    if field == "module":
        out["module"] = event.module.name
    elif field is not None:
        out[field] = getattr(event, field)
    return out


def event_from_json(data: Mapping[str, Any]) -> SessionEvent:
    try:
        kind = EventKind(data["kind"])
    except (KeyError, ValueError) as exc:
        raise MalformedLogError(f"bad event kind: {data.get('kind')!r}") from exc
    ts = data.get("timestamp_ms")
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise MalformedLogError("timestamp_ms must be an integer")
    allowed = {"timestamp_ms", "kind"}
    field = _PAYLOAD_FIELD[kind]
    if field is not None:
        allowed.add(field)
    unknown = set(data) - allowed
    if unknown:
        raise MalformedLogError(f"unexpected event fields: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    if field == "module":
        try:
            kwargs["module"] = ModuleId[data["module"]]
        except KeyError as exc:
            raise MalformedLogError(f"bad module: {data.get('module')!r}") from exc
    elif field is not None:
        if field not in data:
            raise MalformedLogError(f"{kind.value} event needs {field}")
        kwargs[field] = data[field]
    try:
        return SessionEvent(timestamp_ms=ts, kind=kind, **kwargs)
    except ValueError as exc:
        raise MalformedLogError(str(exc)) from exc


def log_to_json(session: Session) -> list[dict[str, Any]]:
    return [event_to_json(e) for e in session.event_log]
