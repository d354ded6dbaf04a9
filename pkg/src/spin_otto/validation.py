"""Quick invariant suite behind ``spin-otto validate``.

Each check returns (passed, detail) and takes seconds at default resolution.
"""

from __future__ import annotations

from typing import Callable, List, Tuple

import numpy as np

from . import dynamics, qcore
from .errors import SpinOttoError
from .logs import get_logger
from .models import CycleConfig, DissipativeConfig, MachineRegime
from .thermo import (
    efficiency_carnot,
    efficiency_from_temperatures,
    irreversible_work,
    local_quasistatic_efficiency,
    quasistatic_closed_form,
    run_cycle_numeric,
    single_spin_otto_eff,
    work_gap,
)

logger = get_logger("validation")

CheckResult = Tuple[bool, str]

GAMMAS = [0.0, 0.25, 0.5, 0.75, 1.0]


def check_single_spin() -> CheckResult:
    value = single_spin_otto_eff(1.0, 4.0)
    return value == 0.75, f"eta_S(1, 4) = {value}"


def check_closed_form_agreement() -> CheckResult:
    worst = 0.0
    for gamma in GAMMAS:
        cfg = CycleConfig(gamma=gamma)
        closed, numeric = quasistatic_closed_form(cfg), run_cycle_numeric(cfg)
        worst = max(
            worst,
            abs(closed.W - numeric.W),
            abs(closed.eta - numeric.eta),
            abs(efficiency_from_temperatures(cfg) - numeric.eta),
        )
    return worst < 1e-8, f"max |closed - numeric| = {worst:.2e}"


def check_first_law() -> CheckResult:
    worst = 0.0
    for gamma in GAMMAS:
        r = run_cycle_numeric(CycleConfig(gamma=gamma, tau=0.5))
        worst = max(worst, abs(r.W + r.Q_H + r.Q_L))
    return worst < 1e-8, f"max |W + Q_H + Q_L| = {worst:.2e}"


def check_reversible_xx() -> CheckResult:
    worst = max(irreversible_work(CycleConfig(gamma=0.0, tau=tau)) for tau in (0.1, 0.5, 1.0, 5.0, 20.0))
    return worst < 1e-10, f"max W_irr at gamma=0 = {worst:.2e}"


def check_microreversibility() -> CheckResult:
    worst = 0.0
    for gamma in (0.25, 0.75, 1.0):
        for tau in (0.1, 1.0, 5.0):
            cfg = CycleConfig(gamma=gamma, tau=tau)
            U, V = dynamics.ramp_propagators(cfg)
            worst = max(worst, float(np.max(np.abs(V.U - U.U.T))))
            dynamics.transition_probabilities(cfg)
    return worst < 1e-10, f"max |V - U^T| = {worst:.2e}"


def check_interference() -> CheckResult:
    cfg = CycleConfig(gamma=1.0, tau=0.3)
    spec1 = qcore.spectrum(cfg.params_low)
    spec2 = qcore.spectrum(cfg.params_high)
    U, V = dynamics.ramp_propagators(cfg)
    lam, delta = dynamics.transition_lambda_delta(U, V, spec1, spec2)
    error = max(
        abs(dynamics.interference_decomposition(U, spec1, spec2)[2] - lam),
        abs(dynamics.interference_decomposition(V, spec1, spec2)[2] - delta),
    )
    return error < 1e-8, f"reconstruction error = {error:.2e}"


def check_gibbs_fixed_point() -> CheckResult:
    cfg = CycleConfig()
    H = qcore.build_hamiltonian(cfg.params_high)
    rho, _ = qcore.gibbs_state(H, cfg.T_H)
    bath = DissipativeConfig(bath_temperature=cfg.T_H, duration=100.0, fixed_params=cfg.params_high)
    trajectory = dynamics.evolve_lindblad(rho, bath, np.linspace(0.0, 100.0, 11))
    drift = max(qcore.trace_distance(state, rho) for state in trajectory.states)
    return drift < 1e-6, f"max drift = {drift:.2e}"


def check_carnot_bound() -> CheckResult:
    margin = np.inf
    for gamma in (0.0, 1.0):
        for T_H in np.arange(1.5, 20.01, 0.5):
            cfg = CycleConfig(gamma=gamma, T_H=float(T_H))
            r = run_cycle_numeric(cfg)
            if r.regime is MachineRegime.ENGINE:
                margin = min(margin, efficiency_carnot(cfg) - r.eta)
    return margin >= -1e-10, f"min Carnot margin = {margin:.2e}"


def check_local_advantage() -> CheckResult:
    gaps = [work_gap(CycleConfig(gamma=g / 10)) for g in range(11)]
    etas = [local_quasistatic_efficiency(CycleConfig(gamma=g / 10)) for g in range(11)]
    passed = abs(gaps[0]) < 1e-10 and all(g < 0 for g in gaps[1:]) and all(e > 0.75 for e in etas[1:])
    return passed, f"work gap at gamma=1: {gaps[-1]:.4f}, eta_Lq at gamma=1: {etas[-1]:.4f}"


CHECKS: List[Tuple[str, Callable[[], CheckResult]]] = [
    ("single-spin efficiency", check_single_spin),
    ("closed form vs numeric cycle", check_closed_form_agreement),
    ("first law", check_first_law),
    ("reversible XX ramps", check_reversible_xx),
    ("microreversibility", check_microreversibility),
    ("interference reconstruction", check_interference),
    ("Lindblad Gibbs fixed point", check_gibbs_fixed_point),
    ("Carnot bound", check_carnot_bound),
    ("local work advantage", check_local_advantage),
]


def run_validation(echo: Callable[[str], None] = print) -> bool:
    """Run every check, print [OK]/[FAIL] lines and return overall success."""
    all_ok = True
    for name, check in CHECKS:
        try:
            passed, detail = check()
        except SpinOttoError as exc:
            passed, detail = False, f"{exc.code}: {exc.message}"
        all_ok = all_ok and passed
        echo(f"[{'OK' if passed else 'FAIL'}] {name}: {detail}")
        if not passed:
            logger.warning("invariant check failed", extra={"stage": "validate", "status": name})
    return all_ok
