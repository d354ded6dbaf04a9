"""Presets for work and efficiency seen by a single spin of the pair."""

from __future__ import annotations

from typing import Any, Dict, List

from .. import dynamics
from ..models import CycleConfig, SweepAxis
from ..thermo import (
    local_finite_time,
    local_quasistatic_efficiency,
    single_spin_otto_eff,
    work_gap,
)
from ..thermo.local import mixing_coefficients
from .global_cycle import GAMMA_PERCENT, TAU_GRID

GAMMA_TWENTIETHS = [i / 20 for i in range(21)]
POWER_TAU_GRID = [round(0.05 * i, 10) for i in range(1, 201)]


def workgap_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="gamma", values=GAMMA_PERCENT)]


def workgap_row(cfg: CycleConfig) -> Dict[str, Any]:
    return {
        "work_gap": work_gap(cfg),
        "eta_Lq": local_quasistatic_efficiency(cfg),
        "eta_S": single_spin_otto_eff(cfg.B_L, cfg.B_H),
    }


def eff_vs_tau_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="gamma", values=[1.0]), SweepAxis(name="tau", values=TAU_GRID)]


def eff_vs_tau_row(cfg: CycleConfig) -> Dict[str, Any]:
    probs = dynamics.transition_probabilities(cfg)
    a_L, a_H = mixing_coefficients(cfg)
    return {
        "lambda": probs.lambda_,
        "delta": probs.delta,
        "lambda_inf": a_H**2 / 2,
        "delta_inf": a_L**2 / 2,
        "eta_Ltau": local_finite_time(cfg, probs).eta_L,
        "eta_Lq": local_quasistatic_efficiency(cfg),
    }


def eff_vs_gamma_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="tau", values=[0.3, 20.0]), SweepAxis(name="gamma", values=GAMMA_TWENTIETHS)]


def eff_vs_gamma_row(cfg: CycleConfig) -> Dict[str, Any]:
    probs = dynamics.transition_probabilities(cfg)
    return {
        "eta_Ltau": local_finite_time(cfg, probs).eta_L,
        "eta_Lq": local_quasistatic_efficiency(cfg),
        "eta_S": single_spin_otto_eff(cfg.B_L, cfg.B_H),
    }


def power_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="tau", values=POWER_TAU_GRID)]


def power_row(cfg: CycleConfig) -> Dict[str, Any]:
    result = local_finite_time(cfg, dynamics.transition_probabilities(cfg))
    return {"P_L": result.P_L, "eta_Ltau": result.eta_L, "W_L": result.W_L}
