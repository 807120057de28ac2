"""Headless trainee simulation.

A simulated trainee runs all three modules against a package: selects every
part, watches every playback step (charged at a fixed, configurable number of
seconds per step so durations are deterministic), then performs the practice
run under a policy:

    PERFECT      always drags the right part
    RANDOM       uniform pick among movable parts, never re-trying a part
                 already rejected within the current step
    ERROR_PRONE  like PERFECT, but with probability error_rate first drags a
                 uniformly random wrong movable part

Seeded policies are fully deterministic: the whole run is planned up front as
a script of timed actions, so the same script can be replayed against the
in-process engines or over the HTTP API with identical results.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from . import familiarization, playback, practice
from .errors import UnknownProcedureError
from .metrics import SessionMetrics, session_metrics
from .model import CoursePackage, Procedure
from .session import (
    EventKind,
    ModuleId,
    Session,
    SessionEvent,
    complete_module,
    enter_module,
    record_event,
    start_session,
)

DEFAULT_STEP_VIEW_SECONDS = 30.0


class PolicyKind(str, Enum):
    PERFECT = "PERFECT"
    RANDOM = "RANDOM"
    ERROR_PRONE = "ERROR_PRONE"


@dataclass(frozen=True)
class TraineePolicy:
    kind: PolicyKind
    seed: int = 0
    error_rate: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError(f"error_rate must lie in [0, 1], got {self.error_rate}")

    @classmethod
    def perfect(cls) -> "TraineePolicy":
        return cls(PolicyKind.PERFECT)

    @classmethod
    def random_parts(cls, seed: int) -> "TraineePolicy":
        return cls(PolicyKind.RANDOM, seed=seed)

    @classmethod
    def error_prone(cls, seed: int, error_rate: float) -> "TraineePolicy":
        return cls(PolicyKind.ERROR_PRONE, seed=seed, error_rate=error_rate)


class ActionKind(str, Enum):
    SELECT_PART = "SELECT_PART"
    ENTER_MODULE = "ENTER_MODULE"
    COMPLETE_MODULE = "COMPLETE_MODULE"
    VIEW_STEP = "VIEW_STEP"
    ATTEMPT = "ATTEMPT"
    ACKNOWLEDGE = "ACKNOWLEDGE"


@dataclass(frozen=True)
class SimAction:
    kind: ActionKind
    timestamp_ms: int
    module: ModuleId | None = None
    part_number: str | None = None
    step_index: int | None = None
    expect_accept: bool | None = None


def plan_attempts(proc: Procedure, policy: TraineePolicy) -> tuple[tuple[str, bool], ...]:
    """The exact (part, accepted) attempt sequence the policy will produce.

    Movable parts at step k are the procedure's parts from k on, so the plan
    is a pure function of the procedure and the policy seed.
    """
    rng = random.Random(policy.seed)
    parts = proc.step_parts
    attempts: list[tuple[str, bool]] = []
    for k, expected in enumerate(parts):
        candidates = list(parts[k:])
        if policy.kind is PolicyKind.PERFECT:
            pass
        elif policy.kind is PolicyKind.RANDOM:
            while True:
                pick = rng.choice(candidates)
                if pick == expected:
                    break
                attempts.append((pick, False))
                candidates.remove(pick)
        else:  # ERROR_PRONE
            wrong = [p for p in candidates if p != expected]
            if wrong and rng.random() < policy.error_rate:
                attempts.append((rng.choice(wrong), False))
        attempts.append((expected, True))
    return tuple(attempts)


def build_script(
    package: CoursePackage,
    procedure_id: str,
    policy: TraineePolicy,
    step_view_seconds: float = DEFAULT_STEP_VIEW_SECONDS,
) -> tuple[SimAction, ...]:
    """Plan the whole three-module run as timed actions (session-start = 0ms)."""
    proc = package.procedure(procedure_id)
    if proc is None:
        raise UnknownProcedureError(procedure_id)
    step_ms = int(round(step_view_seconds * 1000))
    t = 0
    script: list[SimAction] = []
    for part in package.assembly.part_numbers:
        script.append(SimAction(ActionKind.SELECT_PART, t, part_number=part))
    script.append(
        SimAction(ActionKind.COMPLETE_MODULE, t, module=ModuleId.FAMILIARIZATION)
    )
    script.append(SimAction(ActionKind.ENTER_MODULE, t, module=ModuleId.PROCEDURE))
    for step in proc.steps:
        t += step_ms
        script.append(SimAction(ActionKind.VIEW_STEP, t, step_index=step.index))
    script.append(SimAction(ActionKind.COMPLETE_MODULE, t, module=ModuleId.PROCEDURE))
    script.append(SimAction(ActionKind.ENTER_MODULE, t, module=ModuleId.PRACTICE))
    for part, accepted in plan_attempts(proc, policy):
        script.append(
            SimAction(ActionKind.ATTEMPT, t, part_number=part, expect_accept=accepted)
        )
        if not accepted:
            script.append(SimAction(ActionKind.ACKNOWLEDGE, t))
    script.append(SimAction(ActionKind.COMPLETE_MODULE, t, module=ModuleId.PRACTICE))
    return tuple(script)


def simulate_trainee(
    package: CoursePackage,
    procedure_id: str,
    policy: TraineePolicy,
    step_view_seconds: float = DEFAULT_STEP_VIEW_SECONDS,
    trainee_id: str = "sim",
    session_id: str = "sim-session",
) -> tuple[Session, SessionMetrics]:
    """Run the scripted trainee through the real engines; returns the finished
    session and its metrics. Engine errors propagate: on a validated package
    none may occur."""
    proc = package.procedure(procedure_id)
    if proc is None:
        raise UnknownProcedureError(procedure_id)
    script = build_script(package, procedure_id, policy, step_view_seconds)

    session = start_session(
        trainee_id, package.course_id, procedure_id,
        {package.course_id: package}, session_id=session_id,
    )
    view = familiarization.new_view(package.assembly)
    play: playback.PlaybackState | None = None
    prac: practice.PracticeState | None = None

    for action in script:
        ts = action.timestamp_ms
        if action.kind is ActionKind.SELECT_PART:
            view = familiarization.select_part(
                view, action.part_number, package.dim_opacity
            )
            session = record_event(
                session,
                SessionEvent(ts, EventKind.PART_SELECTED, part_number=action.part_number),
            )
        elif action.kind is ActionKind.ENTER_MODULE:
            session = enter_module(session, action.module, timestamp_ms=ts)
            if action.module is ModuleId.PROCEDURE:
                play = playback.start_playback(proc)
            elif action.module is ModuleId.PRACTICE:
                prac = practice.begin_practice(proc)
        elif action.kind is ActionKind.VIEW_STEP:
            play = playback.mark_step_animation_complete(play)
            play = playback.advance(play)
            session = record_event(
                session,
                SessionEvent(ts, EventKind.STEP_VIEWED, step_index=action.step_index),
            )
        elif action.kind is ActionKind.ATTEMPT:
            result = practice.attempt_move(prac, action.part_number)
            prac = result.state
            kind = EventKind.ATTEMPT_ACCEPTED if result.accepted else EventKind.ATTEMPT_REJECTED
            session = record_event(
                session, SessionEvent(ts, kind, part_number=action.part_number)
            )
        elif action.kind is ActionKind.ACKNOWLEDGE:
            prac = practice.acknowledge_alert(prac)
            session = record_event(session, SessionEvent(ts, EventKind.ALERT_ACKNOWLEDGED))
        else:  # COMPLETE_MODULE
            evidence = {
                ModuleId.FAMILIARIZATION: package.assembly,
                ModuleId.PROCEDURE: play,
                ModuleId.PRACTICE: prac,
            }[action.module]
            session = complete_module(session, action.module, evidence, timestamp_ms=ts)

    return session, session_metrics(session)
