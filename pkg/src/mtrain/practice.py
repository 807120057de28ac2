"""Practice-mode adjudication.

For installation the parts sit in a bin and must be dragged onto the assembly
in procedure order; for removal they come off the assembly into the bin. A
wrong part raises a blocking alert that must be acknowledged before anything
else moves. The engine only adjudicates; drag physics and snapping belong to
the UI.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    AlertPendingError,
    EmptyProcedureError,
    NoAlertError,
    PartNotMovableError,
    SessionCompleteError,
)
from .model import Direction, Procedure


@dataclass(frozen=True)
class Alert:
    """Blocking wrong-part message; names both sides so the UI can say why."""

    message: str
    offending_part: str
    expected_part: str


@dataclass(frozen=True)
class PracticeState:
    procedure_id: str
    direction: Direction
    all_parts: tuple[str, ...]  # step parts in procedure order
    placed: tuple[str, ...]  # parts already moved, a prefix of all_parts
    wrong_attempts: int
    per_step_wrong: tuple[int, ...]
    active_alert: Alert | None

    @property
    def expected_index(self) -> int:
        return len(self.placed)

    @property
    def complete(self) -> bool:
        return len(self.placed) == len(self.all_parts)

    @property
    def bin(self) -> frozenset[str]:
        """Bin contents: parts awaiting installation, or parts already removed."""
        if self.direction is Direction.INSTALLATION:
            return frozenset(self.all_parts) - frozenset(self.placed)
        return frozenset(self.placed)

    @property
    def on_assembly(self) -> frozenset[str]:
        return frozenset(self.all_parts) - self.bin

    @property
    def movable(self) -> frozenset[str]:
        """Parts the trainee may currently pick up."""
        if self.direction is Direction.INSTALLATION:
            return self.bin
        return self.on_assembly


@dataclass(frozen=True)
class MoveResult:
    """Outcome of one attempt: the successor state plus the alert if rejected."""

    state: PracticeState
    alert: Alert | None = None

    @property
    def accepted(self) -> bool:
        return self.alert is None


@dataclass(frozen=True)
class PracticeProgress:
    steps_done: int
    steps_total: int
    wrong_attempts: int
    complete: bool


def begin_practice(proc: Procedure) -> PracticeState:
    if not proc.steps:
        raise EmptyProcedureError(f"procedure {proc.procedure_id!r} has no steps")
    return PracticeState(
        procedure_id=proc.procedure_id,
        direction=proc.direction,
        all_parts=proc.step_parts,
        placed=(),
        wrong_attempts=0,
        per_step_wrong=(0,) * len(proc.steps),
        active_alert=None,
    )


def attempt_move(state: PracticeState, part_number: str) -> MoveResult:
    """Adjudicate dragging one part.

    Accepted moves advance to the next step; wrong-order moves are rejected
    with an Alert and touch nothing but the counters and the alert itself.
    """
    if state.complete:
        raise SessionCompleteError(f"procedure {state.procedure_id!r} already complete")
    if state.active_alert is not None:
        raise AlertPendingError("acknowledge the alert before the next attempt")
    if part_number not in state.movable:
        raise PartNotMovableError(part_number)
    expected = state.all_parts[state.expected_index]
    if part_number == expected:
        return MoveResult(state=replace(state, placed=state.placed + (part_number,)))
    verb = "installed" if state.direction is Direction.INSTALLATION else "removed"
    alert = Alert(
        message=f"Wrong part: {part_number} cannot be {verb} now, expected {expected}.",
        offending_part=part_number,
        expected_part=expected,
    )
    wrong = list(state.per_step_wrong)
    wrong[state.expected_index] += 1
    rejected = replace(
        state,
        wrong_attempts=state.wrong_attempts + 1,
        per_step_wrong=tuple(wrong),
        active_alert=alert,
    )
    return MoveResult(state=rejected, alert=alert)


def acknowledge_alert(state: PracticeState) -> PracticeState:
    """Dismiss the blocking alert; everything else stays put."""
    if state.active_alert is None:
        raise NoAlertError("no alert to acknowledge")
    return replace(state, active_alert=None)


def practice_progress(state: PracticeState) -> PracticeProgress:
    return PracticeProgress(
        steps_done=state.expected_index,
        steps_total=len(state.all_parts),
        wrong_attempts=state.wrong_attempts,
        complete=state.complete,
    )
