"""Closed-form Otto cycle with complete thermalization.

All expressions use the Gibbs weights u/Z and v/Z, where u = sinh(2K/T),
v = sinh(2J/T) and Z = 2cosh(2K/T) + 2cosh(2J/T). Work is negative when it is
extracted; heat is positive when the medium absorbs it.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

from .. import dynamics
from ..errors import ZeroHeat
from ..models import ClosedFormResult, CycleConfig, FiniteTimeResult

ZERO_HEAT = 1e-12


def gibbs_weights(K: float, J: float, T: float) -> Tuple[float, float]:
    """Return (u/Z, v/Z) without overflowing at low temperature."""
    x, y = 2 * K / T, 2 * J / T
    top = max(x, y)
    cosh_sum = math.exp(x - top) + math.exp(-x - top) + math.exp(y - top) + math.exp(-y - top)
    u = (math.exp(x - top) - math.exp(-x - top)) / 2
    v = (math.exp(y - top) - math.exp(-y - top)) / 2
    return u / cosh_sum, v / cosh_sum


def _cycle_weights(cfg: CycleConfig) -> Tuple[float, float, float, float, float, float]:
    K_L, K_H = cfg.params_low.k, cfg.params_high.k
    u1, v1 = gibbs_weights(K_L, cfg.J, cfg.T_L)
    u2, v2 = gibbs_weights(K_H, cfg.J, cfg.T_H)
    return K_L, K_H, u1, v1, u2, v2


def _efficiency(W: float, Q: float) -> float:
    if abs(Q) < ZERO_HEAT:
        raise ZeroHeat(f"heat input {Q:.3e} is too small for an efficiency")
    return -W / Q


def quasistatic_closed_form(cfg: CycleConfig) -> ClosedFormResult:
    K_L, K_H, u1, v1, u2, v2 = _cycle_weights(cfg)
    J = cfg.J
    E_A = -4 * K_L * u1 - 4 * J * v1
    E_B = -4 * K_H * u1 - 4 * J * v1
    E_C = -4 * K_H * u2 - 4 * J * v2
    E_D = -4 * K_L * u2 - 4 * J * v2
    W = 4 * (K_L - K_H) * (u1 - u2)
    Q_H = 4 * K_H * (u1 - u2) + 4 * J * (v1 - v2)
    return ClosedFormResult(
        E_A=E_A,
        E_B=E_B,
        E_C=E_C,
        E_D=E_D,
        W=W,
        Q_H=Q_H,
        Q_L=E_A - E_D,
        eta=_efficiency(W, Q_H),
    )


def efficiency_from_temperatures(cfg: CycleConfig) -> float:
    """1 - (K_L u + J v)/(K_H u + J v) with u, v the hot/cold weight differences."""
    K_L, K_H, u1, v1, u2, v2 = _cycle_weights(cfg)
    u, v = u1 - u2, v1 - v2
    denominator = K_H * u + cfg.J * v
    if abs(denominator) < ZERO_HEAT:
        raise ZeroHeat("heat input vanishes")
    return 1 - (K_L * u + cfg.J * v) / denominator


def finite_time_closed_form(cfg: CycleConfig, xi: float) -> FiniteTimeResult:
    """Cycle with nonadiabatic ramps: a fraction xi of the psi_0/psi_3
    populations is swapped on each unitary stroke."""
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must lie in [0, 1], got {xi}")
    K_L, K_H, u1, v1, u2, v2 = _cycle_weights(cfg)
    J = cfg.J
    W = 4 * (K_L - K_H) * (u1 - u2)
    W_tau = W + 8 * xi * (K_L * u2 + K_H * u1)
    Q_tau = 4 * K_H * ((1 - 2 * xi) * u1 - u2) + 4 * J * (v1 - v2)
    return FiniteTimeResult(xi=xi, W_tau=W_tau, Q_tau=Q_tau, eta_tau=_efficiency(W_tau, Q_tau))


def irreversible_work(cfg: CycleConfig, xi: Optional[float] = None) -> float:
    """Extractable work lost to nonadiabatic transitions, W_tau - W_adiabatic.

    ``xi`` is integrated from the ramp when not supplied.
    """
    if cfg.adiabatic:
        return 0.0
    if xi is None:
        xi = dynamics.transition_probabilities(cfg).xi
    K_L, K_H, u1, _, u2, _ = _cycle_weights(cfg)
    return 8 * xi * (K_L * u2 + K_H * u1)
