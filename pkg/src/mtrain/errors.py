"""Exception hierarchy for the mtrain engines and package tooling."""

from __future__ import annotations


class MtrainError(Exception):
    """Base class for every error raised by this package."""


# --- package parsing / serialization ---

class ParseError(MtrainError):
    """A courseware package could not be read from disk."""


class MissingManifestError(ParseError):
    def __init__(self, root: str):
        super().__init__(f"no manifest.json under {root}")
        self.root = root


class MalformedManifestError(ParseError):
    """Manifest is not valid JSON or violates the manifest shape rules."""

    def __init__(self, reason: str, line: int | None = None):
        loc = f"line {line}: " if line is not None else ""
        super().__init__(f"malformed manifest: {loc}{reason}")
        self.line = line
        self.reason = reason


class UnknownFieldError(ParseError):
    """Strict mode: a manifest object carries a key the format does not define."""

    def __init__(self, path: str):
        super().__init__(f"unknown field: {path}")
        self.path = path


class InvariantViolationError(MtrainError):
    """A package handed to the serializer breaks a structural invariant."""


# --- familiarization ---

class UnknownPartError(MtrainError):
    def __init__(self, part_number: str):
        super().__init__(f"unknown part: {part_number}")
        self.part_number = part_number


# --- playback ---

class EmptyProcedureError(MtrainError):
    """Playback and practice need at least one step."""


class InvalidTransitionError(MtrainError):
    pass


class StepNotCompleteError(MtrainError):
    """advance() requires the current step's animation to have finished."""


class IndexOutOfRangeError(MtrainError):
    def __init__(self, index: int, count: int):
        super().__init__(f"step index {index} out of range (procedure has {count} steps)")
        self.index = index
        self.count = count


# --- practice ---

class SessionCompleteError(MtrainError):
    """No moves are accepted once the practice run is complete."""


class AlertPendingError(MtrainError):
    """The blocking alert must be acknowledged before the next attempt."""


class PartNotMovableError(MtrainError):
    def __init__(self, part_number: str):
        super().__init__(f"part not movable: {part_number}")
        self.part_number = part_number


class NoAlertError(MtrainError):
    pass


# --- session progress ---

class UnknownCourseError(MtrainError):
    def __init__(self, course_id: str):
        super().__init__(f"unknown course: {course_id}")
        self.course_id = course_id


class UnknownProcedureError(MtrainError):
    def __init__(self, procedure_id: str):
        super().__init__(f"unknown procedure: {procedure_id}")
        self.procedure_id = procedure_id


class LockedError(MtrainError):
    """A module was entered (or used) before its prerequisites were completed."""

    def __init__(self, module, missing_prerequisite=None, detail: str | None = None):
        if detail is None:
            detail = (
                f"module {module.name} is locked: "
                f"complete {missing_prerequisite.name} first"
            )
        super().__init__(detail)
        self.module = module
        self.missing_prerequisite = missing_prerequisite


class EvidenceInsufficientError(MtrainError):
    def __init__(self, detail: str):
        super().__init__(f"completion evidence insufficient: {detail}")
        self.detail = detail


class NonMonotonicTimestampError(MtrainError):
    def __init__(self, timestamp_ms: int, last_ms: int):
        super().__init__(
            f"event timestamp {timestamp_ms}ms is before the last logged {last_ms}ms"
        )
        self.timestamp_ms = timestamp_ms
        self.last_ms = last_ms


class MalformedLogError(MtrainError):
    def __init__(self, detail: str):
        super().__init__(f"malformed session log: {detail}")
        self.detail = detail


# --- metrics ---

class NonPositiveBaselineError(MtrainError):
    pass


class NameMismatchError(MtrainError):
    def __init__(self, detail: str):
        super().__init__(f"baseline/observed name mismatch: {detail}")
        self.detail = detail
