"""Work and heat seen by spin 1 alone, with local Hamiltonian B sigma_z.

Local energies of the Otto corners are -2B(1 - 2p)u/Z, where p is the weight
of the bare |11> state in psi_0 (or |00> in psi_3) after the ramp: a^2/2 for
adiabatic ramps, lambda or delta for finite ones.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Tuple

import numpy as np

from .. import dynamics, qcore
from ..errors import InvalidFields, SpinOttoError, ZeroDuration, ZeroHeat
from ..models import CycleConfig, LocalCycleResult, PowerPoint, TransitionProbabilities
from .closed_form import ZERO_HEAT, gibbs_weights, quasistatic_closed_form
from .cycle import cycle_states

REDUCTION_ATOL = 1e-10


def _weights(cfg: CycleConfig) -> Tuple[float, float]:
    u1, _ = gibbs_weights(cfg.params_low.k, cfg.J, cfg.T_L)
    u2, _ = gibbs_weights(cfg.params_high.k, cfg.J, cfg.T_H)
    return u1, u2


def mixing_coefficients(cfg: CycleConfig) -> Tuple[float, float]:
    """(a_L, a_H): the |11> amplitude of psi_0 at each field, times sqrt2."""
    return (
        qcore.overlap_coefficients(cfg.params_low)[0],
        qcore.overlap_coefficients(cfg.params_high)[0],
    )


def _efficiency(W: float, Q: float) -> Optional[float]:
    return -W / Q if abs(Q) > ZERO_HEAT else None


def _local_energy(B: float, rho: np.ndarray) -> float:
    return qcore.internal_energy(qcore.partial_trace(rho, keep=1), qcore.local_hamiltonian(B))


def local_quasistatic(cfg: CycleConfig) -> LocalCycleResult:
    """Adiabatic local cycle, cross-checked against partial traces of the
    global corner states."""
    a_L, a_H = mixing_coefficients(cfg)
    u1, u2 = _weights(cfg)
    low = cfg.B_L * (1 - a_L**2)
    high = cfg.B_H * (1 - a_H**2)
    energies = {
        "E_AL": -2 * low * u1,
        "E_BL": -2 * high * u1,
        "E_CL": -2 * high * u2,
        "E_DL": -2 * low * u2,
    }

    corners = cycle_states(cfg.replace(tau=math.inf, t_h=math.inf, t_c=math.inf))
    reduced = {
        "E_AL": _local_energy(cfg.B_L, corners.rho_A),
        "E_BL": _local_energy(cfg.B_H, corners.rho_B),
        "E_CL": _local_energy(cfg.B_H, corners.rho_C),
        "E_DL": _local_energy(cfg.B_L, corners.rho_D),
    }
    for name, value in energies.items():
        if abs(value - reduced[name]) > REDUCTION_ATOL:
            raise SpinOttoError(f"{name} disagrees with the reduced state by {value - reduced[name]:.3e}")

    W_L = 2 * (low - high) * (u1 - u2)
    Q_HL = 2 * high * (u1 - u2)
    return LocalCycleResult(**energies, W_L=W_L, Q_HL=Q_HL, eta_L=_efficiency(W_L, Q_HL))


def local_quasistatic_efficiency(cfg: CycleConfig) -> float:
    a_L, a_H = mixing_coefficients(cfg)
    return 1 - cfg.B_L * (1 - a_L**2) / (cfg.B_H * (1 - a_H**2))


def work_gap(cfg: CycleConfig) -> float:
    """Global minus twice the local extracted work, (-W_G) - 2(-W_L).

    Non-positive: two local spins extract at least as much as the pair.
    """
    a_L, a_H = mixing_coefficients(cfg)
    u1, u2 = _weights(cfg)
    K_L, K_H = cfg.params_low.k, cfg.params_high.k
    closed = 4 * ((K_H - cfg.B_H) - (K_L - cfg.B_L) + (cfg.B_H * a_H**2 - cfg.B_L * a_L**2)) * (u1 - u2)

    W_G = quasistatic_closed_form(cfg).W
    W_L = local_quasistatic(cfg).W_L
    direct = -W_G + 2 * W_L
    if abs(closed - direct) > REDUCTION_ATOL:
        raise SpinOttoError(f"work gap closed form and subtraction differ by {closed - direct:.3e}")
    return closed


def single_spin_otto_eff(B_L: float, B_H: float) -> float:
    if not 0 < B_L < B_H:
        raise InvalidFields(f"need 0 < B_L < B_H, got B_L={B_L}, B_H={B_H}")
    return 1 - B_L / B_H


def cycle_duration(cfg: CycleConfig) -> float:
    return cfg.t_h + cfg.t_c + 2 * cfg.tau


def local_finite_time(cfg: CycleConfig, probs: TransitionProbabilities) -> LocalCycleResult:
    """Local cycle with nonadiabatic ramps described by lambda and delta.

    Power is reported when every stroke has a finite duration.
    """
    a_L, a_H = mixing_coefficients(cfg)
    lambda_inf, delta_inf = a_H**2 / 2, a_L**2 / 2
    u1, u2 = _weights(cfg)
    lam, delta = probs.lambda_, probs.delta

    E_AL = -2 * cfg.B_L * (1 - 2 * delta_inf) * u1
    E_BL = -2 * cfg.B_H * (1 - 2 * lam) * u1
    E_CL = -2 * cfg.B_H * (1 - 2 * lambda_inf) * u2
    E_DL = -2 * cfg.B_L * (1 - 2 * delta) * u2
    W_L = -2 * (
        u1 * (cfg.B_H * (1 - 2 * lam) - cfg.B_L * (1 - 2 * delta_inf))
        + u2 * (cfg.B_L * (1 - 2 * delta) - cfg.B_H * (1 - 2 * lambda_inf))
    )
    Q_HL = -2 * cfg.B_H * (u2 * (1 - 2 * lambda_inf) - u1 * (1 - 2 * lam))
    if abs(Q_HL) < ZERO_HEAT:
        raise ZeroHeat(f"local heat input {Q_HL:.3e} is too small for an efficiency")

    P_L = None
    duration = cycle_duration(cfg)
    if math.isfinite(duration):
        if duration <= 0:
            raise ZeroDuration("cycle time t_h + t_c + 2 tau is zero")
        P_L = abs(W_L) / duration

    return LocalCycleResult(
        E_AL=E_AL,
        E_BL=E_BL,
        E_CL=E_CL,
        E_DL=E_DL,
        W_L=W_L,
        Q_HL=Q_HL,
        eta_L=-W_L / Q_HL,
        P_L=P_L,
        probabilities=probs,
    )


def local_cycle_numeric(cfg: CycleConfig, settle_cycles: int = 1) -> LocalCycleResult:
    """Local energies from partial traces of the numerically evolved corners."""
    corners = cycle_states(cfg, settle_cycles)
    E_AL = _local_energy(cfg.B_L, corners.rho_A)
    E_BL = _local_energy(cfg.B_H, corners.rho_B)
    E_CL = _local_energy(cfg.B_H, corners.rho_C)
    E_DL = _local_energy(cfg.B_L, corners.rho_D)
    W_L = (E_BL - E_AL) + (E_DL - E_CL)
    Q_HL = E_CL - E_BL
    return LocalCycleResult(
        E_AL=E_AL,
        E_BL=E_BL,
        E_CL=E_CL,
        E_DL=E_DL,
        W_L=W_L,
        Q_HL=Q_HL,
        eta_L=_efficiency(W_L, Q_HL),
    )


def max_power_point(cfg: CycleConfig, taus: Iterable[float]) -> PowerPoint:
    """Ramp duration with the largest local power and its efficiency."""
    if math.isinf(cfg.t_h) or math.isinf(cfg.t_c):
        raise ZeroDuration("power needs finite isochore durations t_h and t_c")
    best: Optional[PowerPoint] = None
    for tau in taus:
        point_cfg = cfg.replace(tau=tau)
        result = local_finite_time(point_cfg, dynamics.transition_probabilities(point_cfg))
        if best is None or result.P_L > best.P_L:
            best = PowerPoint(tau=tau, P_L=result.P_L, eta_L=result.eta_L)
    if best is None:
        raise ValueError("taus must not be empty")
    return best
