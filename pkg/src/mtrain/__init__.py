"""Interactive-3D maintenance training: courseware engine, service and CLI."""

from .model import (
    Action,
    Assembly,
    CoursePackage,
    Direction,
    Finding,
    NoticeKind,
    Part,
    Pose,
    Procedure,
    ProcedureStep,
    ResourceSummary,
    SafetyNotice,
    ValidationReport,
)
from .package_io import parse_package, serialize_package
from .validation import required_resources, validate_package

__all__ = [
    "Action",
    "Assembly",
    "CoursePackage",
    "Direction",
    "Finding",
    "NoticeKind",
    "Part",
    "Pose",
    "Procedure",
    "ProcedureStep",
    "ResourceSummary",
    "SafetyNotice",
    "ValidationReport",
    "parse_package",
    "serialize_package",
    "required_resources",
    "validate_package",
]

__version__ = "0.1.0"
