"""Named experiment presets.

Each preset fixes the grid axes, the recorded columns and any parameter
defaults that differ from the base configuration. Overriding a parameter
that is also a grid axis pins that axis to the single override value.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from .. import __version__
from ..errors import InvalidOverride, UnknownPreset
from ..logs import get_logger
from ..models import CycleConfig, RunRecord, SweepAxis
from ..sweep import RowFunction, build_config, canonical_overrides, run_grid
from . import global_cycle, local_spin

logger = get_logger("presets")


class Preset(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    axes: Callable[[CycleConfig], List[SweepAxis]]
    row: RowFunction
    outputs: List[str]
    defaults: Dict[str, Any] = {}


PRESETS: Dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset(
            name="regimes-vs-TH",
            axes=global_cycle.regimes_axes,
            row=global_cycle.regimes_row,
            outputs=["Q_H", "Q_L", "W", "eta", "regime"],
        ),
        Preset(
            name="quasistatic-eff",
            axes=global_cycle.quasistatic_axes,
            row=global_cycle.quasistatic_row,
            outputs=["W", "Q_H", "eta"],
        ),
        Preset(
            name="finite-time-xi-wirr",
            axes=global_cycle.finite_time_axes,
            row=global_cycle.finite_time_row,
            outputs=["xi", "W_tau", "W_irr", "eta_tau"],
        ),
        Preset(
            name="thermalization",
            axes=global_cycle.thermalization_axes,
            row=global_cycle.thermalization_row,
            outputs=["Q_Ht", "W_t", "D", "eta_t"],
        ),
        Preset(
            name="local-workgap",
            axes=local_spin.workgap_axes,
            row=local_spin.workgap_row,
            outputs=["work_gap", "eta_Lq", "eta_S"],
        ),
        Preset(
            name="local-eff-vs-tau",
            axes=local_spin.eff_vs_tau_axes,
            row=local_spin.eff_vs_tau_row,
            outputs=["lambda", "delta", "lambda_inf", "delta_inf", "eta_Ltau", "eta_Lq"],
        ),
        Preset(
            name="local-eff-vs-gamma",
            axes=local_spin.eff_vs_gamma_axes,
            row=local_spin.eff_vs_gamma_row,
            outputs=["eta_Ltau", "eta_Lq", "eta_S"],
        ),
        Preset(
            name="power-surface",
            axes=local_spin.power_axes,
            row=local_spin.power_row,
            outputs=["P_L", "eta_Ltau", "W_L"],
            defaults={"gamma": 1.0, "t_h": 100.0, "t_c": 220.0},
        ),
    )
}


def get_preset(name: str) -> Preset:
    preset = PRESETS.get(name)
    if preset is None:
        raise UnknownPreset(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return preset


def resolve_preset(
    name: str, overrides: Optional[Mapping[str, str]] = None
) -> tuple[Preset, CycleConfig, List[SweepAxis]]:
    """Preset, base configuration and (possibly pinned) axes for a run."""
    preset = get_preset(name)
    pinned = canonical_overrides(overrides or {})
    base = build_config({**preset.defaults, **pinned})
    try:
        axes = [
            SweepAxis(name=axis.name, values=[float(getattr(base, axis.name))]) if axis.name in pinned else axis
            for axis in preset.axes(base)
        ]
    except ValidationError as exc:
        raise InvalidOverride(f"overrides leave an empty grid for {name}: {exc.errors()[0]['msg']}") from exc
    return preset, base, axes


def run_preset(
    name: str,
    overrides: Optional[Mapping[str, str]] = None,
    out: Optional[Path] = None,
    threads: Optional[int] = None,
) -> RunRecord:
    preset, base, axes = resolve_preset(name, overrides)
    logger.info("preset start", extra={"stage": "preset", "status": name})
    payload = {
        "preset": name,
        "base": base.model_dump(mode="json"),
        "axes": [axis.model_dump() for axis in axes],
        "outputs": preset.outputs,
        "version": __version__,
    }
    return run_grid(base, axes, preset.row, preset.outputs, payload, out, threads)
