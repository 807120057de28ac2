"""Step-at-a-time procedure playback.

One animated step is shown at a time; the trainee may pause, replay the
current step as often as they like, and can only advance after the animation
for the current step has run to the end. "Animation complete" is an external
signal (UI or simulator clock); the engine only orders the transitions.
Narration is surfaced via cued_narration and never gates advancing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    EmptyProcedureError,
    IndexOutOfRangeError,
    InvalidTransitionError,
    StepNotCompleteError,
    UnknownPartError,
)
from .model import Assembly, NoticeKind, Procedure, SafetyNotice


class PlaybackStatus(str, Enum):
    PLAYING = "PLAYING"
    PAUSED = "PAUSED"
    STEP_DONE = "STEP_DONE"
    FINISHED = "FINISHED"


@dataclass(frozen=True)
class PlaybackState:
    procedure_id: str
    current_step: int
    status: PlaybackStatus
    step_count: int
    replay_count: tuple[int, ...]
    steps_seen: frozenset[int]
    narration_refs: tuple[str | None, ...]

    @property
    def cued_narration(self) -> str | None:
        """Narration clip for the step currently on screen, if any."""
        return self.narration_refs[self.current_step]


@dataclass(frozen=True)
class Callout:
    """Per-step overlay: part number, nomenclature, tool and torque."""

    part_number: str
    nomenclature: str
    tool: str | None = None
    torque: float | None = None


def start_playback(proc: Procedure) -> PlaybackState:
    if not proc.steps:
        raise EmptyProcedureError(f"procedure {proc.procedure_id!r} has no steps")
    return PlaybackState(
        procedure_id=proc.procedure_id,
        current_step=0,
        status=PlaybackStatus.PLAYING,
        step_count=len(proc.steps),
        replay_count=(0,) * len(proc.steps),
        steps_seen=frozenset({0}),
        narration_refs=tuple(s.narration_ref for s in proc.steps),
    )


def pause(state: PlaybackState) -> PlaybackState:
    if state.status is not PlaybackStatus.PLAYING:
        raise InvalidTransitionError(f"cannot pause while {state.status.value}")
    return replace(state, status=PlaybackStatus.PAUSED)


def resume(state: PlaybackState) -> PlaybackState:
    if state.status is not PlaybackStatus.PAUSED:
        raise InvalidTransitionError(f"cannot resume while {state.status.value}")
    return replace(state, status=PlaybackStatus.PLAYING)


def mark_step_animation_complete(state: PlaybackState) -> PlaybackState:
    """The current step's animation reached its end."""
    if state.status not in (PlaybackStatus.PLAYING, PlaybackStatus.PAUSED):
        raise InvalidTransitionError(
            f"step already complete (status {state.status.value})"
        )
    return replace(state, status=PlaybackStatus.STEP_DONE)


def advance(state: PlaybackState) -> PlaybackState:
    """Move to the next step; only legal once the current step is STEP_DONE."""
    if state.status is not PlaybackStatus.STEP_DONE:
        raise StepNotCompleteError(
            f"cannot advance while step {state.current_step} is {state.status.value}"
        )
    if state.current_step == state.step_count - 1:
        return replace(state, status=PlaybackStatus.FINISHED)
    nxt = state.current_step + 1
    return replace(
        state,
        current_step=nxt,
        status=PlaybackStatus.PLAYING,
        steps_seen=state.steps_seen | {nxt},
    )


def replay_step(state: PlaybackState) -> PlaybackState:
    """Restart the current step's animation; allowed in every status.

    From FINISHED this drops back to PLAYING on the last step, so the step
    must be completed and advanced again to re-finish.
    """
    counts = list(state.replay_count)
    counts[state.current_step] += 1
    return replace(
        state,
        status=PlaybackStatus.PLAYING,
        replay_count=tuple(counts),
    )


def step_callout(proc: Procedure, assembly: Assembly, index: int) -> Callout:
    """Build the overlay for one step from the step and its Part record."""
    if not 0 <= index < len(proc.steps):
        raise IndexOutOfRangeError(index, len(proc.steps))
    step = proc.steps[index]
    part = assembly.part(step.part_number)
    if part is None:
        raise UnknownPartError(step.part_number)
    return Callout(
        part_number=step.part_number,
        nomenclature=part.nomenclature,
        tool=step.tool,
        torque=step.torque,
    )


def step_notices(proc: Procedure, index: int) -> tuple[SafetyNotice, ...]:
    """Notices for one step, warnings first, authored order within each kind."""
    if not 0 <= index < len(proc.steps):
        raise IndexOutOfRangeError(index, len(proc.steps))
    notices = proc.steps[index].notices
    warnings = tuple(n for n in notices if n.kind is NoticeKind.WARNING)
    cautions = tuple(n for n in notices if n.kind is NoticeKind.CAUTION)
    return warnings + cautions
