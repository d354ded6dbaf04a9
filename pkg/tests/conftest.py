"""Shared fixtures and reference integrators."""

from __future__ import annotations

from typing import Callable

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from spin_otto import qcore
from spin_otto.models import CycleConfig, FieldProtocol, SpinParams, Spectrum
from spin_otto.settings import get_settings


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch: pytest.MonkeyPatch, tmp_path) -> None:
    """Single worker, test-local output directory, fresh settings cache."""
    monkeypatch.setenv("SPIN_OTTO_THREADS", "1")
    monkeypatch.setenv("SPIN_OTTO_OUTPUT_DIR", str(tmp_path / "runs"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def default_cfg() -> CycleConfig:
    """B_L=1, B_H=4, J=1, gamma=1, T_L=1, T_H=10."""
    return CycleConfig()


@pytest.fixture
def spectra(default_cfg: CycleConfig) -> tuple[Spectrum, Spectrum]:
    """Analytic spectra at B_L and B_H for the default configuration."""
    return (
        qcore.analytic_spectrum(default_cfg.params_low),
        qcore.analytic_spectrum(default_cfg.params_high),
    )


def schrodinger_oracle(protocol: FieldProtocol, p: SpinParams) -> np.ndarray:
    """Propagator of the linear ramp from an adaptive DOP853 integration."""

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        B = protocol.B_start + (protocol.B_end - protocol.B_start) * t / protocol.tau
        H = qcore.build_hamiltonian(p.with_field(B))
        return (-1j * H @ y.reshape(4, 4)).ravel()

    solution = solve_ivp(
        rhs,
        (0.0, protocol.tau),
        np.eye(4, dtype=complex).ravel(),
        method="DOP853",
        rtol=1e-11,
        atol=1e-12,
    )
    return solution.y[:, -1].reshape(4, 4)


@pytest.fixture
def oracle() -> Callable[[FieldProtocol, SpinParams], np.ndarray]:
    """Reference ramp propagator."""
    return schrodinger_oracle
