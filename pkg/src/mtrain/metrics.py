"""Training and task time metrics, and the effort-saved report.

percent_saved rounds half-up to one decimal; published percentage tables mix
rounding styles, so the report never silently adopts a printed figure: when a
supplied expected percentage disagrees with the recomputed value by more than
0.5 points, a discrepancy note is emitted instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Iterable, Mapping, Sequence

from .errors import MalformedLogError, NameMismatchError, NonPositiveBaselineError
from .session import EventKind, ModuleId, Session

TRAINING_TARGET_PCT = 30.0  # objective: training time cut by 30% or more
TASK_TARGET_PCT = 25.0  # objective: hands-on task time cut by 25% or more
DISCREPANCY_TOLERANCE_PCT = 0.5

_TRAINING_MODULES = (ModuleId.FAMILIARIZATION, ModuleId.PROCEDURE)


@dataclass(frozen=True)
class SessionMetrics:
    training_minutes: float
    task_minutes: float | None  # None until practice was completed
    wrong_attempts: int
    replays: int


@dataclass(frozen=True)
class EffectivenessRow:
    installation_name: str
    baseline_training_minutes: float
    new_training_minutes: float
    baseline_task_minutes: float
    new_task_minutes: float
    training_saved_pct: float
    task_saved_pct: float


@dataclass(frozen=True)
class EffectivenessReport:
    rows: tuple[EffectivenessRow, ...]
    training_objective_met: bool
    task_objective_met: bool
    discrepancies: tuple[str, ...]


def percent_saved(baseline_minutes: float, new_minutes: float) -> float:
    """100 * (baseline - new) / baseline, rounded half-up to one decimal."""
    if baseline_minutes <= 0:
        raise NonPositiveBaselineError(
            f"baseline must be > 0 minutes, got {baseline_minutes}"
        )
    if new_minutes < 0:
        raise ValueError(f"new_minutes must be >= 0, got {new_minutes}")
    b = Decimal(str(baseline_minutes))
    n = Decimal(str(new_minutes))
    pct = (b - n) / b * 100
    return float(pct.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def session_metrics(session: Session) -> SessionMetrics:
    """Roll one session's event log up into minutes and counters.

    Module time is the span between each MODULE_ENTER and the matching
    MODULE_COMPLETE; familiarization and procedure spans count as training,
    practice spans as task time.
    """
    entered_at: dict[ModuleId, int] = {}
    spent_ms: dict[ModuleId, int] = {m: 0 for m in ModuleId}
    completed: set[ModuleId] = set()
    wrong = 0
    replays = 0
    last_ts = 0
    saw_module_event = False
    for event in session.event_log:
        if event.timestamp_ms < last_ts:
            raise MalformedLogError(
                f"timestamp regression at {event.timestamp_ms}ms"
            )
        last_ts = event.timestamp_ms
        if event.kind is EventKind.MODULE_ENTER:
            saw_module_event = True
            entered_at[event.module] = event.timestamp_ms
        elif event.kind is EventKind.MODULE_COMPLETE:
            saw_module_event = True
            start = entered_at.pop(event.module, None)
            if start is None:
                raise MalformedLogError(
                    f"{event.module.name} completed without being entered"
                )
            spent_ms[event.module] += event.timestamp_ms - start
            completed.add(event.module)
        elif event.kind is EventKind.ATTEMPT_REJECTED:
            wrong += 1
        elif event.kind is EventKind.STEP_REPLAYED:
            replays += 1
    if not saw_module_event:
        raise MalformedLogError("no module events")
    training = sum(spent_ms[m] for m in _TRAINING_MODULES) / 60000.0
    task: float | None = None
    if ModuleId.PRACTICE in completed:
        task = spent_ms[ModuleId.PRACTICE] / 60000.0
    return SessionMetrics(
        training_minutes=training,
        task_minutes=task,
        wrong_attempts=wrong,
        replays=replays,
    )


InstallationTimes = tuple[str, float, float]  # (name, training_min, task_min)


def effectiveness_report(
    baseline: Sequence[InstallationTimes],
    observed: Sequence[InstallationTimes],
    expected: Mapping[str, tuple[float | None, float | None]] | None = None,
) -> EffectivenessReport:
    """Per-installation effort saved, objective flags, and discrepancy notes.

    baseline/observed pair up by installation name (baseline order wins);
    expected maps a name to previously published (training_pct, task_pct)
    figures and only feeds the discrepancy notes, never the computed rows.
    """
    base_names = [name for name, _, _ in baseline]
    obs_by_name = {name: (tr, ta) for name, tr, ta in observed}
    if len(set(base_names)) != len(base_names):
        raise NameMismatchError("duplicate installation names in baseline")
    if len(obs_by_name) != len(observed):
        raise NameMismatchError("duplicate installation names in observed")
    if set(base_names) != set(obs_by_name):
        missing = set(base_names) ^ set(obs_by_name)
        raise NameMismatchError(f"installations differ: {sorted(missing)}")

    rows = []
    for name, base_training, base_task in baseline:
        new_training, new_task = obs_by_name[name]
        rows.append(
            EffectivenessRow(
                installation_name=name,
                baseline_training_minutes=base_training,
                new_training_minutes=new_training,
                baseline_task_minutes=base_task,
                new_task_minutes=new_task,
                training_saved_pct=percent_saved(base_training, new_training),
                task_saved_pct=percent_saved(base_task, new_task),
            )
        )

    notes = _discrepancy_notes(rows, expected or {})
    mean_training = sum(r.training_saved_pct for r in rows) / len(rows) if rows else 0.0
    mean_task = sum(r.task_saved_pct for r in rows) / len(rows) if rows else 0.0
    return EffectivenessReport(
        rows=tuple(rows),
        training_objective_met=bool(rows) and mean_training >= TRAINING_TARGET_PCT,
        task_objective_met=bool(rows) and mean_task >= TASK_TARGET_PCT,
        discrepancies=notes,
    )


def _discrepancy_notes(
    rows: Iterable[EffectivenessRow],
    expected: Mapping[str, tuple[float | None, float | None]],
) -> tuple[str, ...]:
    # One note per distinct published value, listing every cell it disagrees
    # with; a repeated printed figure is one inconsistency, not several.
    groups: dict[float, list[str]] = {}
    for row in rows:
        exp = expected.get(row.installation_name)
        if exp is None:
            continue
        for column, exp_pct, computed in (
            ("training", exp[0], row.training_saved_pct),
            ("task", exp[1], row.task_saved_pct),
        ):
            if exp_pct is None:
                continue
            if abs(exp_pct - computed) > DISCREPANCY_TOLERANCE_PCT:
                groups.setdefault(exp_pct, []).append(
                    f"{row.installation_name} {column} computes to {computed}%"
                )
        # groups keyed by printed value, insertion-ordered by first appearance
    return tuple(
        f"expected {printed}% disagrees with arithmetic: {'; '.join(cells)}"
        for printed, cells in groups.items()
    )


def _round1(value: float) -> float:
    return float(Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def mean_training_saved_pct(report: EffectivenessReport) -> float:
    return _round1(sum(r.training_saved_pct for r in report.rows) / len(report.rows))


def mean_task_saved_pct(report: EffectivenessReport) -> float:
    return _round1(sum(r.task_saved_pct for r in report.rows) / len(report.rows))


# --- rendering ---

def metrics_to_json(metrics: SessionMetrics) -> dict[str, Any]:
    return {
        "training_minutes": metrics.training_minutes,
        "task_minutes": metrics.task_minutes,
        "wrong_attempts": metrics.wrong_attempts,
        "replays": metrics.replays,
    }


def report_to_json(report: EffectivenessReport) -> dict[str, Any]:
    return {
        "rows": [
            {
                "installation_name": r.installation_name,
                "baseline_training_minutes": r.baseline_training_minutes,
                "new_training_minutes": r.new_training_minutes,
                "baseline_task_minutes": r.baseline_task_minutes,
                "new_task_minutes": r.new_task_minutes,
                "training_saved_pct": r.training_saved_pct,
                "task_saved_pct": r.task_saved_pct,
            }
            for r in report.rows
        ],
        "training_objective_met": report.training_objective_met,
        "task_objective_met": report.task_objective_met,
        "discrepancies": list(report.discrepancies),
    }


def report_json_bytes(report: EffectivenessReport) -> bytes:
    return json.dumps(
        report_to_json(report), sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def render_report_table(report: EffectivenessReport) -> str:
    """Aligned three-column text table plus objective and discrepancy lines."""
    headers = ("Installation", "Training saved", "Task saved")
    cells = [
        (r.installation_name, f"{r.training_saved_pct}%", f"{r.task_saved_pct}%")
        for r in report.rows
    ]
    widths = [
        max(len(headers[i]), *(len(c[i]) for c in cells)) if cells else len(headers[i])
        for i in range(3)
    ]

    def fmt(row: tuple[str, str, str]) -> str:
        return "  ".join(col.ljust(widths[i]) for i, col in enumerate(row)).rstrip()

    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(c) for c in cells)
    if report.rows:
        lines.append("")
        lines.append(
            f"mean training saved: {mean_training_saved_pct(report)}% "
            f"(objective >= {TRAINING_TARGET_PCT:g}%: "
            f"{'met' if report.training_objective_met else 'NOT met'})"
        )
        lines.append(
            f"mean task saved:     {mean_task_saved_pct(report)}% "
            f"(objective >= {TASK_TARGET_PCT:g}%: "
            f"{'met' if report.task_objective_met else 'NOT met'})"
        )
    for note in report.discrepancies:
        lines.append(f"discrepancy: {note}")
    return "\n".join(lines)
