"""Local-spin view of the two-spin cycle: work gap, efficiencies and power."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spin_otto import dynamics, qcore
from spin_otto.errors import InvalidFields, ZeroDuration
from spin_otto.models import CycleConfig, TransitionProbabilities
from spin_otto.thermo import (
    cycle_states,
    local_cycle_numeric,
    local_finite_time,
    local_quasistatic,
    local_quasistatic_efficiency,
    max_power_point,
    single_spin_otto_eff,
    work_gap,
)
from spin_otto.thermo.local import cycle_duration, mixing_coefficients

GAMMA_TENTHS = [round(0.1 * i, 1) for i in range(1, 11)]


def test_single_spin_efficiency() -> None:
    """1 - B_L/B_H, scale invariant."""
    assert single_spin_otto_eff(1.0, 4.0) == 0.75
    assert single_spin_otto_eff(2.0, 8.0) == 0.75


@pytest.mark.parametrize("fields", [(4.0, 1.0), (0.0, 4.0), (2.0, 2.0)])
def test_single_spin_efficiency_rejects_bad_fields(fields: tuple) -> None:
    """Needs 0 < B_L < B_H."""
    with pytest.raises(InvalidFields):
        single_spin_otto_eff(*fields)


def test_work_gap_vanishes_for_xx_coupling() -> None:
    """gamma = 0: the pair extracts exactly twice the local work."""
    assert abs(work_gap(CycleConfig(gamma=0.0))) < 1e-10


@pytest.mark.parametrize("gamma", GAMMA_TENTHS)
def test_work_gap_favours_local_spins(gamma: float) -> None:
    """Anisotropy makes 2 W_L exceed the global extracted work."""
    assert work_gap(CycleConfig(gamma=gamma)) < 0


def test_local_efficiency_beats_single_spin() -> None:
    """eta_Lq >= 1 - B_L/B_H with equality only at gamma = 0."""
    bound = single_spin_otto_eff(1.0, 4.0)
    assert local_quasistatic_efficiency(CycleConfig(gamma=0.0)) == pytest.approx(bound, abs=1e-12)
    for gamma in GAMMA_TENTHS:
        assert local_quasistatic_efficiency(CycleConfig(gamma=gamma)) > bound


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
def test_local_quasistatic_matches_reduced_states(gamma: float) -> None:
    """Closed-form local energies equal Tr(rho_1 B sigma_z) of the evolved corners."""
    cfg = CycleConfig(gamma=gamma)
    result = local_quasistatic(cfg)
    corners = cycle_states(cfg)
    reduced = qcore.partial_trace(corners.rho_B, keep=1)
    assert result.E_BL == pytest.approx(
        qcore.internal_energy(reduced, qcore.local_hamiltonian(cfg.B_H)), abs=1e-10
    )
    assert result.eta_L == pytest.approx(local_quasistatic_efficiency(cfg), abs=1e-12)


def test_adiabatic_local_probabilities() -> None:
    """Slow ramps leave lambda and delta at a_H^2/2 and a_L^2/2."""
    cfg = CycleConfig(gamma=1.0, tau=20.0)
    probs = dynamics.transition_probabilities(cfg)
    a_L, a_H = mixing_coefficients(cfg)
    assert abs(probs.lambda_ - a_H**2 / 2) < 1e-3
    assert abs(probs.delta - a_L**2 / 2) < 1e-3


def test_fast_ramps_can_outperform_adiabatic_local_engine() -> None:
    """Some tau <= 3 beats eta_Lq by more than 1e-3 while lambda sits below its adiabatic value."""
    cfg = CycleConfig(gamma=1.0)
    eta_q = local_quasistatic_efficiency(cfg)
    lambda_inf = dynamics.adiabatic_lambda_delta(cfg)[0]
    winners = []
    for tau in np.arange(0.05, 3.0001, 0.05):
        point = cfg.replace(tau=float(tau))
        probs = dynamics.transition_probabilities(point)
        if local_finite_time(point, probs).eta_L > eta_q + 1e-3 and probs.lambda_ < lambda_inf:
            winners.append(float(tau))
    assert winners


@pytest.mark.parametrize("scale", [0.0, 0.25, 0.5, 0.9, 1.1, 1.5, 2.0, 3.0])
def test_lambda_below_adiabatic_value_raises_local_efficiency(scale: float) -> None:
    """With delta at its adiabatic value, eta_Ltau > eta_Lq exactly when lambda < lambda_inf."""
    cfg = CycleConfig(gamma=1.0)
    lambda_inf, delta_inf = dynamics.adiabatic_lambda_delta(cfg)
    probs = TransitionProbabilities(xi=0.0, lambda_=scale * lambda_inf, delta=delta_inf, tau=1.0)
    gain = local_finite_time(cfg, probs).eta_L - local_quasistatic_efficiency(cfg)
    assert (gain > 0) == (scale < 1.0)
    assert abs(gain) > 1e-9


def test_slow_local_cycle_recovers_quasistatic() -> None:
    """tau = 20 brings eta_Ltau within 1e-3 of eta_Lq."""
    cfg = CycleConfig(gamma=1.0, tau=20.0)
    result = local_finite_time(cfg, dynamics.transition_probabilities(cfg))
    assert abs(result.eta_L - local_quasistatic_efficiency(cfg)) < 1e-3


def test_xx_local_efficiency_ignores_ramp_speed() -> None:
    """gamma = 0: lambda = delta = 0 at any tau."""
    for tau in (0.1, 1.0, 5.0):
        cfg = CycleConfig(gamma=0.0, tau=tau)
        result = local_finite_time(cfg, dynamics.transition_probabilities(cfg))
        assert result.eta_L == pytest.approx(0.75, abs=1e-10)


@pytest.mark.parametrize("tau", [0.3, 1.0])
def test_local_finite_time_matches_partial_traces(tau: float) -> None:
    """The lambda/delta expressions agree with the reduced evolved states."""
    cfg = CycleConfig(gamma=0.8, tau=tau)
    closed = local_finite_time(cfg, dynamics.transition_probabilities(cfg))
    numeric = local_cycle_numeric(cfg)
    for name in ("E_AL", "E_BL", "E_CL", "E_DL", "W_L", "Q_HL"):
        assert getattr(closed, name) == pytest.approx(getattr(numeric, name), abs=1e-8)


def test_power_needs_finite_cycle() -> None:
    """P_L is reported only when every stroke is finite."""
    slow = CycleConfig(tau=1.0)
    assert local_finite_time(slow, dynamics.transition_probabilities(slow)).P_L is None

    cfg = CycleConfig(tau=1.0, t_h=100.0, t_c=220.0)
    result = local_finite_time(cfg, dynamics.transition_probabilities(cfg))
    assert cycle_duration(cfg) == 322.0
    assert result.P_L == pytest.approx(abs(result.W_L) / 322.0)


def test_zero_length_cycle_has_no_power() -> None:
    """t_h = t_c = 0 with a vanishing ramp is refused."""
    cfg = CycleConfig(tau=1.0, t_h=0.0, t_c=0.0)
    probs = TransitionProbabilities(xi=0.0, lambda_=0.1, delta=0.1, tau=0.0)
    with pytest.raises(ZeroDuration):
        local_finite_time(cfg.model_copy(update={"tau": 0.0}), probs)


def test_max_power_point() -> None:
    """The best tau lies on the grid and carries the largest power."""
    cfg = CycleConfig(gamma=1.0, t_h=100.0, t_c=220.0)
    taus = [0.1, 0.5, 1.0, 2.0, 5.0]
    best = max_power_point(cfg, taus)
    assert best.tau in taus
    for tau in taus:
        point = cfg.replace(tau=tau)
        assert local_finite_time(point, dynamics.transition_probabilities(point)).P_L <= best.P_L + 1e-15


def test_max_power_point_requires_finite_isochores() -> None:
    """Infinite t_h or t_c has zero power everywhere."""
    with pytest.raises(ZeroDuration):
        max_power_point(CycleConfig(t_h=math.inf, t_c=10.0), [1.0])
