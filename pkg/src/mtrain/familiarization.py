"""Part Familiarization view state.

The trainee browses the assembly's part list; picking a part renders it at
full opacity while every other part drops to the package's dim level (the
"context view"), and mirrors the pick into a secondary single-part window.
The engine holds no camera state: rotate/move is purely a UI concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import UnknownPartError
from .model import Assembly

FULL_OPACITY = 1.0


@dataclass(frozen=True)
class FamiliarizationView:
    selection: str | None
    opacity_map: Mapping[str, float]
    secondary_model: str | None
    context_view_enabled: bool


def _frozen_map(data: dict[str, float]) -> Mapping[str, float]:
    return MappingProxyType(dict(data))


def _uniform(part_numbers) -> Mapping[str, float]:
    return _frozen_map({p: FULL_OPACITY for p in part_numbers})


def _with_opacities(view: FamiliarizationView, dim_opacity: float) -> Mapping[str, float]:
    if view.selection is None or not view.context_view_enabled:
        return _uniform(view.opacity_map)
    return _frozen_map(
        {
            p: FULL_OPACITY if p == view.selection else dim_opacity
            for p in view.opacity_map
        }
    )


def new_view(assembly: Assembly) -> FamiliarizationView:
    """Fresh view: nothing selected, every part fully opaque."""
    return FamiliarizationView(
        selection=None,
        opacity_map=_uniform(assembly.part_numbers),
        secondary_model=None,
        context_view_enabled=False,
    )


def select_part(
    view: FamiliarizationView, part_number: str, dim_opacity: float
) -> FamiliarizationView:
    """Select a part from the parts list.

    The selection drives the list highlight, goes to the secondary window, and
    turns the context view on (it can be toggled back off with
    set_context_view). Raises UnknownPartError for parts outside the assembly.
    """
    if part_number not in view.opacity_map:
        raise UnknownPartError(part_number)
    if not 0 < dim_opacity < 1:
        raise ValueError(f"dim_opacity must lie in (0, 1), got {dim_opacity}")
    selected = FamiliarizationView(
        selection=part_number,
        opacity_map=view.opacity_map,
        secondary_model=part_number,
        context_view_enabled=True,
    )
    return FamiliarizationView(
        selection=selected.selection,
        opacity_map=_with_opacities(selected, dim_opacity),
        secondary_model=selected.secondary_model,
        context_view_enabled=True,
    )


def set_context_view(
    view: FamiliarizationView, enabled: bool, dim_opacity: float
) -> FamiliarizationView:
    """Toggle the context view; opacities follow the flag and the selection."""
    if not 0 < dim_opacity < 1:
        raise ValueError(f"dim_opacity must lie in (0, 1), got {dim_opacity}")
    toggled = FamiliarizationView(
        selection=view.selection,
        opacity_map=view.opacity_map,
        secondary_model=view.secondary_model,
        context_view_enabled=enabled,
    )
    return FamiliarizationView(
        selection=toggled.selection,
        opacity_map=_with_opacities(toggled, dim_opacity),
        secondary_model=toggled.secondary_model,
        context_view_enabled=enabled,
    )


def clear_selection(view: FamiliarizationView) -> FamiliarizationView:
    """Drop the selection and return to the fresh-view state (idempotent)."""
    return FamiliarizationView(
        selection=None,
        opacity_map=_uniform(view.opacity_map),
        secondary_model=None,
        context_view_enabled=False,
    )
