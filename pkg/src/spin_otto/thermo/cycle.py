"""Four-stroke Otto cycle on density matrices.

A -> B expansion ramp (B_L to B_H), B -> C hot isochore, C -> D compression
ramp, D -> A cold isochore. Infinite durations stand for adiabatic ramps and
complete thermalization.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

import numpy as np

from .. import dynamics, qcore
from ..errors import NonCyclicState
from ..logs import get_logger
from ..models import (
    CornerStates,
    CycleConfig,
    CycleResult,
    DissipativeConfig,
    MachineRegime,
    Propagator,
    Spectrum,
    ThermalizationPoint,
)
from .closed_form import quasistatic_closed_form

logger = get_logger("cycle")

SIGN_ATOL = 1e-10
CLOSURE_TOLERANCE = 0.01


def classify_signs(Q_H: float, Q_L: float, W: float) -> MachineRegime:
    if min(abs(Q_H), abs(Q_L), abs(W)) < SIGN_ATOL:
        return MachineRegime.NONE
    if Q_H > 0 and Q_L < 0:
        return MachineRegime.ENGINE if W < 0 else MachineRegime.ACCELERATOR
    if Q_H < 0 and Q_L > 0 and W > 0:
        return MachineRegime.REFRIGERATOR
    if Q_H < 0 and Q_L < 0 and W > 0:
        return MachineRegime.HEATER
    return MachineRegime.NONE


def classify_machine(r: CycleResult) -> MachineRegime:
    """Label the cycle from the signs of (Q_H, Q_L, W).

    | regime       | Q_H | Q_L | W |
    | Engine       |  +  |  -  | - |
    | Refrigerator |  -  |  +  | + |
    | Accelerator  |  +  |  -  | + |
    | Heater       |  -  |  -  | + |
    """
    return classify_signs(r.Q_H, r.Q_L, r.W)


def efficiency_carnot(cfg: CycleConfig) -> float:
    return 1 - cfg.T_L / cfg.T_H


def _isochore(rho: np.ndarray, cfg: CycleConfig, hot: bool) -> np.ndarray:
    params = cfg.params_high if hot else cfg.params_low
    T = cfg.T_H if hot else cfg.T_L
    duration = cfg.t_h if hot else cfg.t_c
    if math.isinf(duration):
        return qcore.gibbs_state(qcore.build_hamiltonian(params), T)[0]
    bath = DissipativeConfig(
        bath_temperature=T,
        Gamma=cfg.Gamma,
        duration=duration,
        fixed_params=params,
        dt=cfg.lindblad_dt,
    )
    return dynamics.evolve_lindblad(rho, bath).final


def _unitary_stroke(
    rho: np.ndarray, P: Optional[Propagator], spec_from: Spectrum, spec_to: Spectrum
) -> np.ndarray:
    if P is None:
        return qcore.adiabatic_transport(rho, spec_from, spec_to)
    return P.U @ rho @ P.U.conj().T


def cycle_states(cfg: CycleConfig, settle_cycles: int = 1) -> CornerStates:
    """Run the strokes from the cold Gibbs state, ``settle_cycles`` times
    when the cold isochore is finite, and return the last cycle's corners."""
    spec1 = qcore.spectrum(cfg.params_low)
    spec2 = qcore.spectrum(cfg.params_high)
    xi = None
    U = V = None
    if not cfg.adiabatic:
        U, V = dynamics.ramp_propagators(cfg)
        xi = dynamics.transition_xi(U, spec1, spec2, V)

    rho_A = qcore.gibbs_state(qcore.build_hamiltonian(cfg.params_low), cfg.T_L)[0]
    rounds = max(1, settle_cycles) if not math.isinf(cfg.t_c) else 1
    for _ in range(rounds):
        rho_B = _unitary_stroke(rho_A, U, spec1, spec2)
        rho_C = _isochore(rho_B, cfg, hot=True)
        rho_D = _unitary_stroke(rho_C, V, spec2, spec1)
        rho_final = _isochore(rho_D, cfg, hot=False)
        corners = CornerStates(
            rho_A=rho_A, rho_B=rho_B, rho_C=rho_C, rho_D=rho_D, rho_final=rho_final, xi=xi
        )
        rho_A = rho_final
    return corners


def run_cycle_numeric(
    cfg: CycleConfig, strict: bool = False, settle_cycles: int = 1
) -> CycleResult:
    """Numerical Otto cycle with energies Tr(rho H) at every corner.

    With a finite cold isochore the last heat is taken up to the actual final
    state; when that state is further than 0.01 (trace distance) from the
    starting one the result is flagged ``non_cyclic`` or, with ``strict``,
    NonCyclicState is raised.
    """
    logger.info(
        "cycle start",
        extra={"stage": "cycle", "status": f"gamma={cfg.gamma} tau={cfg.tau} t_h={cfg.t_h} t_c={cfg.t_c}"},
    )
    corners = cycle_states(cfg, settle_cycles)
    H_L = qcore.build_hamiltonian(cfg.params_low)
    H_H = qcore.build_hamiltonian(cfg.params_high)
    E_A = qcore.internal_energy(corners.rho_A, H_L)
    E_B = qcore.internal_energy(corners.rho_B, H_H)
    E_C = qcore.internal_energy(corners.rho_C, H_H)
    E_D = qcore.internal_energy(corners.rho_D, H_L)
    if math.isinf(cfg.t_c):
        E_final = E_A
        closure = 0.0
    else:
        E_final = qcore.internal_energy(corners.rho_final, H_L)
        closure = qcore.trace_distance(corners.rho_final, corners.rho_A)

    non_cyclic = closure > CLOSURE_TOLERANCE
    if non_cyclic:
        if strict:
            raise NonCyclicState(f"cold isochore ends {closure:.3e} away from the starting state")
        logger.warning(
            "cycle does not close",
            extra={"stage": "cycle", "status": f"closure_distance={closure:.3e}"},
        )

    W1, Q_H, W2, Q_L = E_B - E_A, E_C - E_B, E_D - E_C, E_final - E_D
    W = W1 + W2
    regime = classify_signs(Q_H, Q_L, W)

    W_irr = None
    if corners.xi is not None and math.isinf(cfg.t_h) and math.isinf(cfg.t_c):
        W_irr = W - quasistatic_closed_form(cfg.replace(tau=math.inf)).W

    return CycleResult(
        E_A=E_A,
        E_B=E_B,
        E_C=E_C,
        E_D=E_D,
        W1=W1,
        W2=W2,
        W=W,
        Q_H=Q_H,
        Q_L=Q_L,
        eta=-W / Q_H if regime is MachineRegime.ENGINE else None,
        regime=regime,
        W_irr=W_irr,
        xi=corners.xi,
        closure_distance=closure,
        non_cyclic=non_cyclic,
    )


def thermalization_profile(
    cfg: CycleConfig, samples: Sequence[float]
) -> List[ThermalizationPoint]:
    """Cycle quantities as a function of the hot-isochore duration.

    Ramps are adiabatic and the cold isochore is complete; the distance is
    measured between the state at C and the hot Gibbs state.
    """
    spec1 = qcore.spectrum(cfg.params_low)
    spec2 = qcore.spectrum(cfg.params_high)
    H_L = qcore.build_hamiltonian(cfg.params_low)
    H_H = qcore.build_hamiltonian(cfg.params_high)
    rho_A = qcore.gibbs_state(H_L, cfg.T_L)[0]
    rho_B = qcore.adiabatic_transport(rho_A, spec1, spec2)
    reference = qcore.gibbs_state(H_H, cfg.T_H)[0]
    E_A = qcore.internal_energy(rho_A, H_L)
    E_B = qcore.internal_energy(rho_B, H_H)

    times = [float(t) for t in samples]
    bath = DissipativeConfig(
        bath_temperature=cfg.T_H,
        Gamma=cfg.Gamma,
        duration=max(times),
        fixed_params=cfg.params_high,
        dt=cfg.lindblad_dt,
    )
    trajectory = dynamics.evolve_lindblad(rho_B, bath, times)

    profile = []
    for t, rho_C in zip(times, trajectory.states):
        E_C = qcore.internal_energy(rho_C, H_H)
        E_D = qcore.internal_energy(qcore.adiabatic_transport(rho_C, spec2, spec1), H_L)
        Q = E_C - E_B
        W = (E_B - E_A) + (E_D - E_C)
        profile.append(
            ThermalizationPoint(
                t_h=t,
                Q_Ht=Q,
                W_t=W,
                D=qcore.trace_distance(rho_C, reference),
                eta_t=-W / Q if abs(Q) > 1e-12 else None,
            )
        )
    return profile


def thermalization_time(
    cfg: CycleConfig, threshold: float = 1e-5, samples: Optional[Sequence[float]] = None
) -> Optional[float]:
    """First sampled hot-isochore duration with D(rho_C, Gibbs) below ``threshold``."""
    samples = samples if samples is not None else np.arange(0.0, 301.0, 1.0)
    for point in thermalization_profile(cfg, samples):
        if point.D < threshold:
            return point.t_h
    return None
