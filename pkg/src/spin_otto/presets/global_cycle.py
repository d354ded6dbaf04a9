"""Presets for the two-spin cycle as a whole."""

from __future__ import annotations

import math
from typing import Any, Dict, List

from .. import dynamics
from ..models import CycleConfig, SweepAxis
from ..thermo import (
    finite_time_closed_form,
    irreversible_work,
    quasistatic_closed_form,
    run_cycle_numeric,
    thermalization_profile,
)

GAMMA_PERCENT = [i / 100 for i in range(101)]
GAMMA_QUARTERS = [0.0, 0.25, 0.5, 0.75, 1.0]
TAU_GRID = [round(0.05 * i, 10) for i in range(1, 101)]
T_H_MAX = 20.0


def regimes_axes(base: CycleConfig) -> List[SweepAxis]:
    steps = int(math.floor((T_H_MAX - base.T_L) / 0.1 + 1e-9))
    return [
        SweepAxis(name="gamma", values=[0.0, 1.0]),
        SweepAxis(name="T_H", values=[round(base.T_L + 0.1 * i, 10) for i in range(1, steps + 1)]),
    ]


def regimes_row(cfg: CycleConfig) -> Dict[str, Any]:
    result = run_cycle_numeric(cfg)
    return {
        "Q_H": result.Q_H,
        "Q_L": result.Q_L,
        "W": result.W,
        "eta": result.eta,
        "regime": result.regime.value,
    }


def quasistatic_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="gamma", values=GAMMA_PERCENT)]


def quasistatic_row(cfg: CycleConfig) -> Dict[str, Any]:
    result = quasistatic_closed_form(cfg)
    return {"W": result.W, "Q_H": result.Q_H, "eta": result.eta}


def finite_time_axes(base: CycleConfig) -> List[SweepAxis]:
    return [SweepAxis(name="gamma", values=GAMMA_QUARTERS), SweepAxis(name="tau", values=TAU_GRID)]


def finite_time_row(cfg: CycleConfig) -> Dict[str, Any]:
    xi = dynamics.transition_probabilities(cfg).xi
    finite = finite_time_closed_form(cfg, xi)
    return {
        "xi": xi,
        "W_tau": finite.W_tau,
        "W_irr": irreversible_work(cfg, xi),
        "eta_tau": finite.eta_tau,
    }


def thermalization_axes(base: CycleConfig) -> List[SweepAxis]:
    return [
        SweepAxis(name="gamma", values=[0.0, 0.5, 1.0]),
        SweepAxis(name="t_h", values=[float(t) for t in range(0, 301, 5)]),
    ]


def thermalization_row(cfg: CycleConfig) -> Dict[str, Any]:
    (point,) = thermalization_profile(cfg, [cfg.t_h])
    return {"Q_Ht": point.Q_Ht, "W_t": point.W_t, "D": point.D, "eta_t": point.eta_t}

