"""Referential-integrity validation for courseware packages.

A package with an empty error list is safe for every downstream engine: no
dangling part or asset references, homogeneous procedure direction, declared
tools, and one step per part. Findings never raise; they accumulate into the
report so authors see everything at once.

Error rules:
    V-1  duplicate part_number in the assembly part list
    V-2  step references a part_number the assembly does not define
    V-3  step action contradicts the procedure direction
    V-4  step uses a tool missing from required_tools
    V-5  asset reference not present in the package
    V-6  step declares torque but no tool
    V-9  part appears in more than one step of the same procedure

Warning rules:
    V-7  part never referenced by any procedure
    V-8  step with empty callout_text
"""

from __future__ import annotations

from collections import Counter

from .model import CoursePackage, Finding, Procedure, ResourceSummary, ValidationReport

_EXPECTED_ACTION = {
    "INSTALLATION": "INSTALL",
    "REMOVAL": "REMOVE",
}


def validate_package(pkg: CoursePackage) -> ValidationReport:
    errors: list[Finding] = []
    warnings: list[Finding] = []

    def err(rule: str, location: str, message: str) -> None:
        errors.append(Finding(rule, location, message))

    def warn(rule: str, location: str, message: str) -> None:
        warnings.append(Finding(rule, location, message))

    counts = Counter(p.part_number for p in pkg.assembly.parts)
    for part_number, n in counts.items():
        if n > 1:
            err("V-1", "assembly.parts", f"part_number {part_number!r} appears {n} times")
    known_parts = set(counts)

    for part in pkg.assembly.parts:
        if part.mesh_ref not in pkg.asset_index:
            err(
                "V-5",
                f"assembly.parts[{part.part_number}].mesh_ref",
                f"{part.mesh_ref!r} is not in the package",
            )

    referenced: set[str] = set()
    for proc in pkg.procedures:
        loc = f"procedures[{proc.procedure_id}]"
        expected_action = _EXPECTED_ACTION[proc.direction.value]
        declared_tools = set(proc.required_tools)
        step_parts = Counter(s.part_number for s in proc.steps)
        for part_number, n in step_parts.items():
            if n > 1:
                err("V-9", f"{loc}.steps", f"part {part_number!r} is used by {n} steps")
        for step in proc.steps:
            sloc = f"{loc}.steps[{step.index}]"
            referenced.add(step.part_number)
            if step.part_number not in known_parts:
                err("V-2", sloc, f"unknown part {step.part_number!r}")
            if step.action.value != expected_action:
                err(
                    "V-3",
                    sloc,
                    f"{step.action.value} step in a {proc.direction.value} procedure",
                )
            if step.tool is not None and step.tool not in declared_tools:
                err("V-4", sloc, f"tool {step.tool!r} is not in required_tools")
            if step.torque is not None and step.tool is None:
                err("V-6", sloc, f"torque {step.torque} given without a tool")
            for ref_name in ("animation_ref", "narration_ref"):
                ref = getattr(step, ref_name)
                if ref is not None and ref not in pkg.asset_index:
                    err("V-5", f"{sloc}.{ref_name}", f"{ref!r} is not in the package")
            if not step.callout_text:
                warn("V-8", sloc, "callout_text is empty")

    for part in pkg.assembly.parts:
        if part.part_number not in referenced:
            warn(
                "V-7",
                f"assembly.parts[{part.part_number}]",
                "part is not referenced by any procedure",
            )

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def required_resources(proc: Procedure) -> ResourceSummary:
    """Tools, consumables and spares to stage before running a procedure.

    Tools are the union of per-step tools and the declared required_tools,
    de-duplicated in first-occurrence order (steps first, then declarations).
    """
    tools: list[str] = []
    seen: set[str] = set()
    for step in proc.steps:
        if step.tool is not None and step.tool not in seen:
            seen.add(step.tool)
            tools.append(step.tool)
    for tool in proc.required_tools:
        if tool not in seen:
            seen.add(tool)
            tools.append(tool)
    return ResourceSummary(
        tools=tuple(tools),
        consumables=proc.consumables,
        spares=proc.spares,
    )
