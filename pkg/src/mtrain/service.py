"""HTTP hosting for courseware packages and trainee sessions.

The server is authoritative: it owns the familiarization, playback and
practice state for every session and re-validates module gating and practice
moves, so clients (including the browser UI) can never adjudicate locally.
Packages are validated at startup; a package with validation errors refuses
the whole directory.

Status codes: 404 unknown ids/paths, 400 malformed input, 409 legal requests
that the current state forbids (locked module, wrong transition, pending
alert, non-monotonic timestamp, insufficient evidence).
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from pydantic import BaseModel

from . import familiarization, playback, practice
from .errors import (
    AlertPendingError,
    EvidenceInsufficientError,
    InvalidTransitionError,
    LockedError,
    MalformedLogError,
    NameMismatchError,
    NoAlertError,
    NonMonotonicTimestampError,
    NonPositiveBaselineError,
    ParseError,
    PartNotMovableError,
    SessionCompleteError,
    StepNotCompleteError,
    UnknownPartError,
)
from .metrics import effectiveness_report, metrics_to_json, report_to_json, session_metrics
from .model import CoursePackage, ValidationReport
from .package_io import manifest_json, parse_package
from .session import (
    EventKind,
    ModuleId,
    Session,
    SessionEvent,
    accessible,
    complete_module,
    enter_module,
    event_from_json,
    record_event,
    start_session,
)
from .validation import validate_package

log = logging.getLogger("mtrain.service")

_MEDIA_TYPES = {".glb": "model/gltf-binary", ".ogg": "audio/ogg", ".json": "application/json"}

_CONFLICT_ERRORS = (
    LockedError,
    EvidenceInsufficientError,
    InvalidTransitionError,
    StepNotCompleteError,
    SessionCompleteError,
    AlertPendingError,
    PartNotMovableError,
    NoAlertError,
    NonMonotonicTimestampError,
)


class CoursewareDirectoryError(Exception):
    """Startup refused: at least one package failed to parse or validate."""

    def __init__(self, problems: dict[str, str]):
        details = "\n".join(f"{path}:\n{text}" for path, text in problems.items())
        super().__init__(f"invalid courseware packages:\n{details}")
        self.problems = problems


@dataclass
class LoadedCourse:
    package: CoursePackage
    root: Path
    report: ValidationReport


class SessionRecord:
    """Server-side authoritative state for one trainee session."""

    def __init__(self, session: Session, package: CoursePackage):
        self.session = session
        self.package = package
        self.view = familiarization.new_view(package.assembly)
        self.playback: playback.PlaybackState | None = None
        self.practice: practice.PracticeState | None = None
        self.lock = threading.Lock()

    @property
    def procedure(self):
        return self.package.procedure(self.session.procedure_id)


def load_courseware_dir(courseware_dir: str | Path) -> dict[str, LoadedCourse]:
    """Parse and validate every package under the directory; all must be clean."""
    courseware_dir = Path(courseware_dir)
    problems: dict[str, str] = {}
    catalog: dict[str, LoadedCourse] = {}
    roots = sorted(
        p.parent for p in courseware_dir.glob("*/manifest.json") if p.is_file()
    )
    for root in roots:
        try:
            pkg = parse_package(root)
        except ParseError as exc:
            problems[str(root)] = str(exc)
            continue
        report = validate_package(pkg)
        if not report.ok:
            problems[str(root)] = report.render()
            continue
        if pkg.course_id in catalog:
            problems[str(root)] = f"duplicate course_id {pkg.course_id!r}"
            continue
        catalog[pkg.course_id] = LoadedCourse(pkg, root, report)
    if problems:
        raise CoursewareDirectoryError(problems)
    return catalog


class CreateSessionBody(BaseModel):
    trainee_id: str
    course_id: str
    procedure_id: str


class AttemptBody(BaseModel):
    part_number: str
    timestamp_ms: int | None = None


class ContextViewBody(BaseModel):
    enabled: bool


def _snapshot(record: SessionRecord) -> dict[str, Any]:
    session = record.session
    fam = record.view
    out: dict[str, Any] = {
        "session_id": session.session_id,
        "trainee_id": session.trainee_id,
        "course_id": session.course_id,
        "procedure_id": session.procedure_id,
        "completed": sorted(m.name for m in session.completed),
        "entered": session.entered.name if session.entered is not None else None,
        "accessible": [m.name for m in ModuleId if accessible(session, m)],
        "event_count": len(session.event_log),
        "last_timestamp_ms": session.last_timestamp_ms,
        "familiarization": {
            "selection": fam.selection,
            "secondary_model": fam.secondary_model,
            "context_view_enabled": fam.context_view_enabled,
            "opacity_map": dict(fam.opacity_map),
            "selected_parts": sorted(
                {
                    e.part_number
                    for e in session.event_log
                    if e.kind is EventKind.PART_SELECTED
                }
            ),
        },
        "playback": None,
        "practice": None,
    }
    if record.playback is not None:
        pb = record.playback
        out["playback"] = {
            "current_step": pb.current_step,
            "status": pb.status.value,
            "step_count": pb.step_count,
            "replay_count": list(pb.replay_count),
            "steps_seen": sorted(pb.steps_seen),
            "cued_narration": pb.cued_narration,
        }
    if record.practice is not None:
        pr = record.practice
        out["practice"] = {
            "direction": pr.direction.value,
            "bin": sorted(pr.bin),
            "on_assembly": sorted(pr.on_assembly),
            "placed": list(pr.placed),
            "steps_done": pr.expected_index,
            "steps_total": len(pr.all_parts),
            "wrong_attempts": pr.wrong_attempts,
            "per_step_wrong": list(pr.per_step_wrong),
            "complete": pr.complete,
            "active_alert": (
                None
                if pr.active_alert is None
                else {
                    "message": pr.active_alert.message,
                    "offending_part": pr.active_alert.offending_part,
                    "expected_part": pr.active_alert.expected_part,
                }
            ),
        }
    return out


def create_app(courseware_dir: str | Path) -> FastAPI:
    catalog = load_courseware_dir(courseware_dir)
    app = FastAPI(title="mtrain courseware service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, SessionRecord] = {}
    store_lock = threading.Lock()
    app.state.catalog = catalog
    app.state.sessions = sessions

    def get_course(course_id: str) -> LoadedCourse:
        course = catalog.get(course_id)
        if course is None:
            raise HTTPException(404, f"unknown course {course_id!r}")
        return course

    def get_record(session_id: str) -> SessionRecord:
        record = sessions.get(session_id)
        if record is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return record

    @app.get("/courses")
    def list_courses() -> list[dict[str, Any]]:
        return [
            {
                "course_id": c.package.course_id,
                "title": c.package.title,
                "procedures": [
                    {
                        "procedure_id": p.procedure_id,
                        "direction": p.direction.value,
                        "step_count": len(p.steps),
                    }
                    for p in c.package.procedures
                ],
            }
            for c in catalog.values()
        ]

    @app.get("/courses/{course_id}/package")
    def get_package(course_id: str) -> dict[str, Any]:
        return manifest_json(get_course(course_id).package)

    @app.get("/courses/{course_id}/assets/{asset_path:path}")
    def get_asset(course_id: str, asset_path: str) -> Response:
        course = get_course(course_id)
        if asset_path not in course.package.asset_index:
            raise HTTPException(404, f"unknown asset {asset_path!r}")
        data = (course.root / asset_path).read_bytes()
        media = _MEDIA_TYPES.get(Path(asset_path).suffix, "application/octet-stream")
        return Response(content=data, media_type=media)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, str]:
        course = get_course(body.course_id)
        if course.package.procedure(body.procedure_id) is None:
            raise HTTPException(404, f"unknown procedure {body.procedure_id!r}")
        session_id = str(uuid.uuid4())
        session = start_session(
            body.trainee_id,
            body.course_id,
            body.procedure_id,
            {body.course_id: course.package},
            session_id=session_id,
        )
        with store_lock:
            sessions[session_id] = SessionRecord(session, course.package)
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        record = get_record(session_id)
        with record.lock:
            return _snapshot(record)

    @app.post("/sessions/{session_id}/events")
    def post_event(session_id: str, body: dict[str, Any]) -> dict[str, Any]:
        record = get_record(session_id)
        with record.lock:
            try:
                _apply_event(record, body)
            except _CONFLICT_ERRORS as exc:
                raise HTTPException(409, str(exc))
            except (MalformedLogError, ValueError) as exc:
                raise HTTPException(400, str(exc))
            except UnknownPartError as exc:
                raise HTTPException(404, str(exc))
            return _snapshot(record)

    @app.post("/sessions/{session_id}/practice/attempts")
    def post_attempt(session_id: str, body: AttemptBody) -> dict[str, Any]:
        record = get_record(session_id)
        with record.lock:
            if record.practice is None:
                raise HTTPException(409, "practice module has not been entered")
            ts = body.timestamp_ms
            if ts is None:
                ts = record.session.last_timestamp_ms
            try:
                result = practice.attempt_move(record.practice, body.part_number)
                kind = (
                    EventKind.ATTEMPT_ACCEPTED
                    if result.accepted
                    else EventKind.ATTEMPT_REJECTED
                )
                record.session = record_event(
                    record.session,
                    SessionEvent(ts, kind, part_number=body.part_number),
                )
            except _CONFLICT_ERRORS as exc:
                raise HTTPException(409, str(exc))
            record.practice = result.state
            progress = practice.practice_progress(result.state)
            return {
                "result": "accepted" if result.accepted else "rejected",
                "alert": (
                    None
                    if result.alert is None
                    else {
                        "message": result.alert.message,
                        "offending_part": result.alert.offending_part,
                        "expected_part": result.alert.expected_part,
                    }
                ),
                "progress": {
                    "steps_done": progress.steps_done,
                    "steps_total": progress.steps_total,
                    "wrong_attempts": progress.wrong_attempts,
                    "complete": progress.complete,
                },
            }

    @app.post("/sessions/{session_id}/familiarization/context")
    def set_context_view(session_id: str, body: ContextViewBody) -> dict[str, Any]:
        # view-state toggle, not a logged trainee event
        record = get_record(session_id)
        with record.lock:
            record.view = familiarization.set_context_view(
                record.view, body.enabled, record.package.dim_opacity
            )
            return _snapshot(record)

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str) -> dict[str, Any]:
        record = get_record(session_id)
        with record.lock:
            return metrics_to_json(session_metrics(record.session))

    @app.get("/reports/effectiveness")
    def get_effectiveness(
        baseline: str, observed: str, expect: str | None = None
    ) -> dict[str, Any]:
        try:
            base = _load_times_file(baseline)
            obs = _load_times_file(observed)
            exp = _load_expect_file(expect) if expect else None
            report = effectiveness_report(base, obs, exp)
        except FileNotFoundError as exc:
            raise HTTPException(404, str(exc))
        except (NameMismatchError, NonPositiveBaselineError, ValueError) as exc:
            raise HTTPException(400, str(exc))
        return report_to_json(report)

    return app


def _apply_event(record: SessionRecord, body: dict[str, Any]) -> None:
    if not isinstance(body, dict):
        raise MalformedLogError("event body must be a JSON object")
    data = dict(body)
    if data.get("timestamp_ms") is None:
        data["timestamp_ms"] = record.session.last_timestamp_ms
    event = event_from_json(data)
    kind = event.kind
    proc = record.procedure

    if kind is EventKind.MODULE_ENTER:
        record.session = enter_module(
            record.session, event.module, timestamp_ms=event.timestamp_ms
        )
        if event.module is ModuleId.PROCEDURE and record.playback is None:
            record.playback = playback.start_playback(proc)
        elif event.module is ModuleId.PRACTICE and record.practice is None:
            record.practice = practice.begin_practice(proc)
        return

    if kind is EventKind.MODULE_COMPLETE:
        evidence: Any
        if event.module is ModuleId.FAMILIARIZATION:
            evidence = record.package.assembly
        elif event.module is ModuleId.PROCEDURE:
            evidence = record.playback
        else:
            evidence = record.practice
        if evidence is None:
            raise EvidenceInsufficientError(f"{event.module.name} was never entered")
        record.session = complete_module(
            record.session, event.module, evidence, timestamp_ms=event.timestamp_ms
        )
        return

    if kind is EventKind.PART_SELECTED:
        record.view = familiarization.select_part(
            record.view, event.part_number, record.package.dim_opacity
        )
        record.session = record_event(record.session, event)
        return

    if kind in (EventKind.STEP_VIEWED, EventKind.STEP_REPLAYED):
        if record.playback is None:
            raise LockedError(
                ModuleId.PROCEDURE, detail="procedure module has not been entered"
            )
        if event.step_index != record.playback.current_step:
            raise InvalidTransitionError(
                f"step {event.step_index} is not the current step "
                f"({record.playback.current_step})"
            )
        if kind is EventKind.STEP_VIEWED:
            advanced = playback.advance(
                playback.mark_step_animation_complete(record.playback)
            )
        else:
            advanced = playback.replay_step(record.playback)
        record.session = record_event(record.session, event)
        record.playback = advanced
        return

    if kind is EventKind.ALERT_ACKNOWLEDGED:
        if record.practice is None:
            raise LockedError(
                ModuleId.PRACTICE, detail="practice module has not been entered"
            )
        cleared = practice.acknowledge_alert(record.practice)
        record.session = record_event(record.session, event)
        record.practice = cleared
        return

    # ATTEMPT_ACCEPTED / ATTEMPT_REJECTED: outcomes are adjudicated server-side
    raise MalformedLogError(
        f"{kind.value} events are produced by POST .../practice/attempts"
    )


def _load_times_file(path: str) -> list[tuple[str, float, float]]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return parse_times_json(raw, source=path)


def parse_times_json(raw: Any, source: str = "<data>") -> list[tuple[str, float, float]]:
    """[{installation, training_minutes, task_minutes}] -> (name, training, task)."""
    if not isinstance(raw, list):
        raise ValueError(f"{source}: expected a JSON array")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ValueError(f"{source}[{i}]: expected an object")
        try:
            name = item["installation"]
            training = float(item["training_minutes"])
            task = float(item["task_minutes"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{source}[{i}]: {exc}") from exc
        out.append((str(name), training, task))
    return out


def _load_expect_file(path: str) -> dict[str, tuple[float | None, float | None]]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return parse_expect_json(raw, source=path)


def parse_expect_json(
    raw: Any, source: str = "<data>"
) -> dict[str, tuple[float | None, float | None]]:
    """[{installation, training_saved_pct?, task_saved_pct?}] -> lookup map."""
    if not isinstance(raw, list):
        raise ValueError(f"{source}: expected a JSON array")
    out: dict[str, tuple[float | None, float | None]] = {}
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "installation" not in item:
            raise ValueError(f"{source}[{i}]: expected an object with 'installation'")
        training = item.get("training_saved_pct")
        task = item.get("task_saved_pct")
        out[str(item["installation"])] = (
            None if training is None else float(training),
            None if task is None else float(task),
        )
    return out


def serve(courseware_dir: str | Path, bind_address: str = "127.0.0.1:8000") -> None:
    """Validate every package, then host them; refuses to start when invalid."""
    import uvicorn

    app = create_app(courseware_dir)
    host, _, port = bind_address.partition(":")
    log.info("serving courseware from %s on %s", courseware_dir, bind_address)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
