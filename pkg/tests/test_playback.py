from __future__ import annotations

from dataclasses import replace

import pytest

from conftest import tiny_package
from mtrain.errors import (
    EmptyProcedureError,
    IndexOutOfRangeError,
    InvalidTransitionError,
    StepNotCompleteError,
)
from mtrain.model import NoticeKind, Procedure, SafetyNotice
from mtrain.playback import (
    PlaybackStatus,
    advance,
    mark_step_animation_complete,
    pause,
    replay_step,
    resume,
    start_playback,
    step_callout,
    step_notices,
)


@pytest.fixture
def proc3(tiny_proc) -> Procedure:
    return tiny_proc


def test_start_three_steps(proc3):
    state = start_playback(proc3)
    assert state.current_step == 0
    assert state.status is PlaybackStatus.PLAYING
    assert state.steps_seen == {0}
    assert state.step_count == 3


def test_start_single_step():
    state = start_playback(tiny_package(1).procedures[0])
    assert (state.current_step, state.status) == (0, PlaybackStatus.PLAYING)


def test_start_empty_procedure(proc3):
    with pytest.raises(EmptyProcedureError):
        start_playback(replace(proc3, steps=()))


def test_mark_complete_from_playing(proc3):
    state = mark_step_animation_complete(start_playback(proc3))
    assert state.status is PlaybackStatus.STEP_DONE
    assert state.current_step == 0


def test_mark_complete_from_paused(proc3):
    state = mark_step_animation_complete(pause(start_playback(proc3)))
    assert state.status is PlaybackStatus.STEP_DONE


def test_mark_complete_twice_is_invalid(proc3):
    state = mark_step_animation_complete(start_playback(proc3))
    with pytest.raises(InvalidTransitionError):
        mark_step_animation_complete(state)


def _finished(proc):
    state = start_playback(proc)
    for _ in proc.steps:
        state = advance(mark_step_animation_complete(state))
    return state


def test_mark_complete_when_finished(proc3):
    with pytest.raises(InvalidTransitionError):
        mark_step_animation_complete(_finished(proc3))


def test_advance_requires_step_done(proc3):
    with pytest.raises(StepNotCompleteError):
        advance(start_playback(proc3))


def test_advance_moves_to_next_step(proc3):
    state = advance(mark_step_animation_complete(start_playback(proc3)))
    assert (state.current_step, state.status) == (1, PlaybackStatus.PLAYING)
    assert state.steps_seen == {0, 1}


def test_advance_past_last_finishes(proc3):
    state = _finished(proc3)
    assert state.status is PlaybackStatus.FINISHED
    assert state.current_step == 2
    assert state.steps_seen == {0, 1, 2}


def test_replay_returns_to_playing(proc3):
    state = mark_step_animation_complete(start_playback(proc3))
    replayed = replay_step(state)
    assert replayed.status is PlaybackStatus.PLAYING
    assert replayed.current_step == 0
    assert replayed.replay_count[0] == 1


def test_replay_in_finished_replays_last_step(proc3):
    state = replay_step(_finished(proc3))
    assert (state.current_step, state.status) == (2, PlaybackStatus.PLAYING)
    assert state.replay_count[2] == 1


def test_replay_counter_accumulates(proc3):
    state = replay_step(replay_step(start_playback(proc3)))
    assert state.replay_count[0] == 2
    assert state.current_step == 0


def test_pause_resume_round_trip(proc3):
    state = resume(pause(start_playback(proc3)))
    assert state.status is PlaybackStatus.PLAYING
    with pytest.raises(InvalidTransitionError):
        resume(state)


def test_callout_with_tool_and_torque(demo_pkg):
    install = demo_pkg.procedure("install-hydraulic-pump")
    callout = step_callout(install, demo_pkg.assembly, 1)
    assert callout.part_number == "HP-102"
    assert callout.nomenclature == "Drive Shaft"
    assert callout.tool == "T-10"
    assert callout.torque == 18.0


def test_callout_without_tool(demo_pkg):
    install = demo_pkg.procedure("install-hydraulic-pump")
    callout = step_callout(install, demo_pkg.assembly, 0)
    assert callout.tool is None
    assert callout.torque is None


def test_callout_index_out_of_range(proc3, tiny_pkg):
    with pytest.raises(IndexOutOfRangeError):
        step_callout(proc3, tiny_pkg.assembly, 99)


def test_notices_warnings_sort_first(proc3):
    c1 = SafetyNotice(NoticeKind.CAUTION, "c1")
    w1 = SafetyNotice(NoticeKind.WARNING, "w1")
    steps = (replace(proc3.steps[0], notices=(c1, w1)),) + proc3.steps[1:]
    proc = replace(proc3, steps=steps)
    assert step_notices(proc, 0) == (w1, c1)


def test_notices_empty(proc3):
    assert step_notices(proc3, 0) == ()


def test_notices_stable_within_kind(proc3):
    w1 = SafetyNotice(NoticeKind.WARNING, "w1")
    w2 = SafetyNotice(NoticeKind.WARNING, "w2")
    steps = (replace(proc3.steps[0], notices=(w1, w2)),) + proc3.steps[1:]
    assert step_notices(replace(proc3, steps=steps), 0) == (w1, w2)


def test_narration_cue_follows_current_step(demo_pkg):
    install = demo_pkg.procedure("install-hydraulic-pump")
    state = start_playback(install)
    assert state.cued_narration == "audio/install-step-0.ogg"
    state = advance(mark_step_animation_complete(state))
    assert state.cued_narration == "audio/install-step-1.ogg"


def test_finished_requires_every_step_completed(proc3):
    # exhaustive walk for N=3: FINISHED only ever appears after 3 completions
    from itertools import product

    ops = {
        "mark": mark_step_animation_complete,
        "advance": advance,
        "replay": replay_step,
        "pause": pause,
        "resume": resume,
    }
    for sequence in product(ops, repeat=6):
        state = start_playback(proc3)
        completions = 0
        for name in sequence:
            try:
                nxt = ops[name](state)
            except Exception:
                continue
            if name == "mark":
                completions += 1
            if nxt.status is PlaybackStatus.FINISHED and state.status is not PlaybackStatus.FINISHED:
                assert completions >= 3
            state = nxt
