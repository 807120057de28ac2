from __future__ import annotations

import json
import random

import pytest

from conftest import INSTALL_PROC, tiny_package
from mtrain.errors import UnknownProcedureError
from mtrain.session import log_to_json
from mtrain.simulate import (
    ActionKind,
    PolicyKind,
    TraineePolicy,
    build_script,
    plan_attempts,
    simulate_trainee,
)


def _log_bytes(session) -> bytes:
    return json.dumps(log_to_json(session), sort_keys=True).encode()


def test_perfect_run_is_clean(demo_pkg):
    session, metrics = simulate_trainee(demo_pkg, INSTALL_PROC, TraineePolicy.perfect())
    assert metrics.wrong_attempts == 0
    assert metrics.replays == 0
    assert metrics.task_minutes == 0.0  # practice actions are instantaneous
    # five steps at the default 30 simulated seconds each
    assert metrics.training_minutes == pytest.approx(2.5)


def test_unknown_procedure(demo_pkg):
    with pytest.raises(UnknownProcedureError):
        simulate_trainee(demo_pkg, "nope", TraineePolicy.perfect())


def test_seeded_run_is_reproducible(demo_pkg):
    policy = TraineePolicy.random_parts(7)
    first, m1 = simulate_trainee(demo_pkg, INSTALL_PROC, policy)
    second, m2 = simulate_trainee(demo_pkg, INSTALL_PROC, policy)
    assert _log_bytes(first) == _log_bytes(second)
    assert m1 == m2
    # frozen from the seeded run itself (the run-twice check above guards it)
    assert m1.wrong_attempts == 5


def test_error_prone_rate_zero_matches_perfect(demo_pkg):
    _, sloppy = simulate_trainee(
        demo_pkg, INSTALL_PROC, TraineePolicy.error_prone(3, 0.0)
    )
    _, perfect = simulate_trainee(demo_pkg, INSTALL_PROC, TraineePolicy.perfect())
    assert sloppy == perfect


def test_error_prone_rate_one_errs_once_per_step(demo_pkg):
    _, metrics = simulate_trainee(
        demo_pkg, INSTALL_PROC, TraineePolicy.error_prone(3, 1.0)
    )
    # the last step has a single movable part, so no wrong pick is possible
    assert metrics.wrong_attempts == 4


def test_error_rate_validated():
    with pytest.raises(ValueError):
        TraineePolicy(PolicyKind.ERROR_PRONE, seed=1, error_rate=1.5)


def test_plan_accepted_subsequence_is_step_order(tiny_proc):
    for seed in range(50):
        plan = plan_attempts(tiny_proc, TraineePolicy.random_parts(seed))
        accepted = [part for part, ok in plan if ok]
        assert accepted == list(tiny_proc.step_parts)
        # rejected parts are never retried within the same step
        seen_this_step: set[str] = set()
        for part, ok in plan:
            if ok:
                seen_this_step.clear()
            else:
                assert part not in seen_this_step
                seen_this_step.add(part)


def test_script_timestamps_monotone(demo_pkg):
    script = build_script(demo_pkg, INSTALL_PROC, TraineePolicy.random_parts(11))
    stamps = [a.timestamp_ms for a in script]
    assert stamps == sorted(stamps)
    kinds = [a.kind for a in script]
    assert kinds.count(ActionKind.VIEW_STEP) == 5
    assert kinds.count(ActionKind.COMPLETE_MODULE) == 3


def test_random_mean_wrong_attempts_near_expectation():
    pkg = tiny_package(3)
    total = 0
    runs = 2000
    for seed in range(runs):
        _, metrics = simulate_trainee(
            pkg, "tiny-proc", TraineePolicy.random_parts(seed), step_view_seconds=1
        )
        total += metrics.wrong_attempts
    mean = total / runs
    # expectation for 3 parts: 1 + 0.5 + 0 wrong picks per run
    assert abs(mean - 1.5) / 1.5 < 0.1


def test_simulation_on_removal_procedure(demo_pkg):
    session, metrics = simulate_trainee(
        demo_pkg, "remove-hydraulic-pump", TraineePolicy.random_parts(5)
    )
    assert metrics.task_minutes is not None
    assert len(session.completed) == 3


def test_generated_packages_run_all_policies():
    rng = random.Random(123)
    for i in range(25):
        pkg = tiny_package(rng.randint(1, 5))
        for policy in (
            TraineePolicy.perfect(),
            TraineePolicy.random_parts(i),
            TraineePolicy.error_prone(i, 0.4),
        ):
            _, metrics = simulate_trainee(pkg, "tiny-proc", policy, step_view_seconds=2)
            assert metrics.training_minutes > 0
