"""Time evolution: field-ramp propagators, Lindblad isochores and the
transition probabilities that feed the finite-time cycle."""

from __future__ import annotations

import math
from typing import Iterable, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from . import qcore
from .errors import (
    DegenerateSpectrum,
    InvalidFields,
    InvalidState,
    MicroreversibilityViolation,
    StepSizeTooLarge,
    StepsTooFew,
)
from .logs import get_logger
from .models import (
    CycleConfig,
    DissipativeConfig,
    FieldProtocol,
    Propagator,
    Spectrum,
    SpinParams,
    TransitionProbabilities,
)
from .settings import get_settings

logger = get_logger("dynamics")

MIN_STEPS = 16
SUDDEN_TAU = 1e-6
UNITARY_ATOL = 1e-10
MICROREVERSIBILITY_ATOL = 1e-8
STATE_ATOL = 1e-8
GAUSS_NODES = (0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6)

RampScheme = Literal["magnus4", "midpoint"]


def _ordered_product(stack: np.ndarray) -> np.ndarray:
    """stack[n-1] @ ... @ stack[1] @ stack[0], multiplied pairwise."""
    while len(stack) > 1:
        if len(stack) % 2:
            tail = stack[-1:]
            paired = stack[1:-1:2] @ stack[0:-1:2]
            stack = np.concatenate([paired, tail])
        else:
            stack = stack[1::2] @ stack[0::2]
    return stack[0]


def check_unitary(U: np.ndarray, atol: float = UNITARY_ATOL) -> np.ndarray:
    error = np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))
    if error > atol:
        raise InvalidState(f"propagator deviates from unitarity by {error:.3e}")
    return U


def _step_generators(protocol: FieldProtocol, p_base: SpinParams, steps: int, scheme: str) -> np.ndarray:
    """Hermitian M_n with U_step = exp(-i M_n) for each sub-interval."""
    dt = protocol.tau / steps
    starts = np.arange(steps) * dt
    if scheme == "midpoint":
        return dt * qcore.hamiltonian_stack(protocol.field(starts + 0.5 * dt), p_base.J, p_base.gamma)
    H1 = qcore.hamiltonian_stack(protocol.field(starts + GAUSS_NODES[0] * dt), p_base.J, p_base.gamma)
    H2 = qcore.hamiltonian_stack(protocol.field(starts + GAUSS_NODES[1] * dt), p_base.J, p_base.gamma)
    return 0.5 * dt * (H1 + H2) - 1j * (math.sqrt(3) / 12) * dt**2 * (H2 @ H1 - H1 @ H2)


def propagate_unitary(
    protocol: FieldProtocol, p_base: SpinParams, steps: Optional[int] = None, scheme: Optional[RampScheme] = None
) -> Propagator:
    """Time-ordered propagator of the ramp, one exact exponential per sub-interval.

    ``magnus4`` (default) uses the two-node fourth-order Magnus generator,
    ``midpoint`` the Hamiltonian at the sub-interval midpoint. ``p_base``
    supplies J and gamma.
    """
    settings = get_settings()
    steps = steps if steps is not None else settings.unitary_steps
    scheme = scheme or settings.ramp_scheme
    if steps < MIN_STEPS:
        raise StepsTooFew(f"{steps} steps requested, at least {MIN_STEPS} are needed")

    if protocol.tau <= SUDDEN_TAU:
        U = np.eye(4, dtype=complex)
    else:
        energies, vectors = np.linalg.eigh(_step_generators(protocol, p_base, steps, scheme))
        step_unitaries = (vectors * np.exp(-1j * energies)[:, None, :]) @ np.conj(np.swapaxes(vectors, 1, 2))
        U = check_unitary(_ordered_product(step_unitaries))

    return Propagator(U=U, protocol=protocol, params=p_base, steps=steps)


def compression_propagator(
    protocol: FieldProtocol,
    p_base: SpinParams,
    steps: Optional[int] = None,
    expansion: Optional[Propagator] = None,
) -> Propagator:
    """V(tau) for H_com(t) = H_exp(tau - t).

    For real-symmetric Hamiltonians V(tau) is the transpose of the expansion
    propagator; the identity is checked against ``expansion`` (computed when
    not given).
    """
    if protocol.direction != "compression":
        raise InvalidFields("compression_propagator needs a compression protocol")
    V = propagate_unitary(protocol, p_base, steps)
    if expansion is None:
        expansion = propagate_unitary(protocol.reversed(), p_base, V.steps)
    error = np.max(np.abs(V.U - expansion.U.T))
    if error > UNITARY_ATOL:
        raise MicroreversibilityViolation(f"V(tau) differs from U(tau)^T by {error:.3e}")
    return V


def ramp_propagators(
    cfg: CycleConfig, steps: Optional[int] = None
) -> Tuple[Propagator, Propagator]:
    steps = steps if steps is not None else cfg.unitary_steps
    U = propagate_unitary(cfg.expansion, cfg.params_low, steps)
    V = compression_propagator(cfg.expansion.reversed(), cfg.params_low, U.steps, expansion=U)
    return U, V


def jump_operators(p: SpinParams) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """Bath coupling through sigma_x of spin 1, split by transition energy.

    X1 lowers by w1 = 2k + 2J, X2 by w2 = 2k - 2J.
    """
    spec = qcore.spectrum(p)
    omega1 = 2 * spec.k + 2 * p.J
    omega2 = 2 * spec.k - 2 * p.J
    if abs(omega2) < 1e-12:
        raise DegenerateSpectrum("k = J: the second bath channel has zero frequency")

    a, b, c, d = qcore.overlap_coefficients(p)
    psi = [spec.state(i) for i in range(4)]

    def ket_bra(i: int, j: int) -> np.ndarray:
        return np.outer(psi[i], psi[j].conj())

    X1 = 0.5 * ((c - d) * ket_bra(1, 3) + (a + b) * ket_bra(0, 2))
    X2 = 0.5 * ((c + d) * ket_bra(2, 3) + (a - b) * ket_bra(0, 1))
    return X1, X2, omega1, omega2


def thermal_occupation(omega: float, T: float) -> float:
    return 1.0 / math.expm1(omega / T)


def _superoperator(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # Row-major vectorisation: vec(A rho B) = (A kron B^T) vec(rho).
    return np.kron(left, right.T)


def _dissipator(X: np.ndarray) -> np.ndarray:
    XdX = X.conj().T @ X
    eye = np.eye(X.shape[0])
    return _superoperator(X, X.conj().T) - 0.5 * _superoperator(XdX, eye) - 0.5 * _superoperator(eye, XdX)


def liouvillian(cfg: DissipativeConfig) -> np.ndarray:
    """Lindblad generator at the isochore's fixed field, acting on row-major vec(rho)."""
    H = qcore.build_hamiltonian(cfg.fixed_params)
    eye = np.eye(4)
    generator = -1j * (_superoperator(H, eye) - _superoperator(eye, H))
    X1, X2, omega1, omega2 = jump_operators(cfg.fixed_params)
    for X, omega in ((X1, omega1), (X2, omega2)):
        if omega < 0:
            X, omega = X.conj().T, -omega
        n = thermal_occupation(omega, cfg.bath_temperature)
        generator = generator + cfg.Gamma * (n + 1) * _dissipator(X) + cfg.Gamma * n * _dissipator(X.conj().T)
    return generator


def _rk4_step_matrix(generator: np.ndarray, h: float) -> np.ndarray:
    # For a constant generator the four RK4 stages collapse into this polynomial.
    Lh = generator * h
    step = np.eye(generator.shape[0], dtype=complex)
    term = step
    for order in range(1, 5):
        term = term @ Lh / order
        step = step + term
    return step


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def lindblad_step_size(cfg: DissipativeConfig, generator: np.ndarray) -> float:
    if cfg.dt is not None:
        return cfg.dt
    scaled = get_settings().lindblad_dt_scale / cfg.Gamma
    return min(scaled, 0.1 / np.linalg.norm(generator, 2))


def _check_sample(rho: np.ndarray, t: float) -> None:
    trace = np.trace(rho).real
    lowest = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if abs(trace - 1) > STATE_ATOL or lowest < -STATE_ATOL:
        raise StepSizeTooLarge(
            f"state left the physical set at t={t:g} (trace={trace:.10f}, min eigenvalue={lowest:.3e})"
        )


def evolve_lindblad(
    rho0: np.ndarray, cfg: DissipativeConfig, samples: Optional[Sequence[float]] = None
) -> Trajectory:
    """Integrate the master equation from ``rho0`` and return the states at ``samples``
    (default: start and end of the isochore)."""
    qcore.validate_state(rho0)
    times = np.asarray(samples if samples is not None else [0.0, cfg.duration], dtype=float)
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("sample times must be non-negative and non-decreasing")

    generator = liouvillian(cfg)
    dt = lindblad_step_size(cfg, generator)
    vector = rho0.reshape(-1).astype(complex)
    states = []
    current = 0.0
    for t in times:
        span = t - current
        if span > 0:
            n = max(1, math.ceil(span / dt - 1e-9))
            step = _rk4_step_matrix(generator, span / n)
            vector = np.linalg.matrix_power(step, n) @ vector
            current = t
        rho = vector.reshape(4, 4)
        _check_sample(rho, t)
        states.append(rho.copy())

    logger.debug(
        "lindblad trajectory done", extra={"stage": "isochore", "status": f"samples={len(times)}"}
    )
    return Trajectory(times=times, states=np.array(states))


def _amplitude(bra: np.ndarray, P: np.ndarray, ket: np.ndarray) -> complex:
    return complex(bra.conj() @ P @ ket)


def _probability(bra: np.ndarray, P: np.ndarray, ket: np.ndarray) -> float:
    return abs(_amplitude(bra, P, ket)) ** 2


def _require_equal(values: Iterable[float], what: str) -> None:
    values = list(values)
    spread = max(values) - min(values)
    if spread > MICROREVERSIBILITY_ATOL:
        raise MicroreversibilityViolation(f"{what} differ by {spread:.3e}; refine the integrator")


def transition_xi(
    U: Propagator, spec1: Spectrum, spec2: Spectrum, V: Optional[Propagator] = None
) -> float:
    """xi = |<psi_0^(2)|U|psi_3^(1)>|^2, checked against the three equivalent
    forms (backward transition and both compression transitions)."""
    if V is None:
        V = compression_propagator(U.protocol.reversed(), U.params, U.steps, expansion=U)
    forms = (
        _probability(spec2.state(0), U.U, spec1.state(3)),
        _probability(spec2.state(3), U.U, spec1.state(0)),
        _probability(spec1.state(3), V.U, spec2.state(0)),
        _probability(spec1.state(0), V.U, spec2.state(3)),
    )
    _require_equal(forms, "xi transition probabilities")
    return float(np.clip(forms[0], 0.0, 1.0))


def transition_lambda_delta(
    U: Propagator, V: Propagator, spec1: Spectrum, spec2: Spectrum
) -> Tuple[float, float]:
    """Overlaps between the bare |00>, |11> states and the ramped eigenstates."""
    lam = (
        _probability(qcore.KET_00, U.U, spec1.state(3)),
        _probability(qcore.KET_11, U.U, spec1.state(0)),
    )
    delta = (
        _probability(qcore.KET_11, V.U, spec2.state(0)),
        _probability(qcore.KET_00, V.U, spec2.state(3)),
    )
    _require_equal(lam, "lambda overlaps")
    _require_equal(delta, "delta overlaps")
    leak = max(
        _probability(qcore.KET_01, U.U, spec1.state(0)),
        _probability(qcore.KET_10, U.U, spec1.state(0)),
        _probability(qcore.KET_01, V.U, spec2.state(0)),
        _probability(qcore.KET_10, V.U, spec2.state(0)),
    )
    if leak > 1e-10:
        raise MicroreversibilityViolation(f"ramp leaks {leak:.3e} out of the |00>,|11> sector")
    return float(np.clip(lam[0], 0.0, 1.0)), float(np.clip(delta[0], 0.0, 1.0))


def interference_decomposition(
    P: Propagator, spec1: Spectrum, spec2: Spectrum
) -> Tuple[complex, complex, float]:
    """Split lambda (expansion) or delta (compression) into two amplitudes
    whose difference squared reproduces it."""
    if P.params.gamma * P.params.J == 0:
        raise DegenerateSpectrum("gamma = 0: psi_0/psi_3 are bare states, there is no interference")
    source, target = (spec1, spec2) if P.protocol.direction == "expansion" else (spec2, spec1)
    a, b, c, d = qcore.overlap_coefficients(target.params)
    det = a * d - b * c
    if abs(det) < 1e-14:
        raise DegenerateSpectrum("a*d - b*c vanishes")
    amp_a = math.sqrt(2) * a / det * _amplitude(target.state(3), P.U, source.state(3))
    amp_b = math.sqrt(2) * c / det * _amplitude(target.state(0), P.U, source.state(3))
    return amp_a, amp_b, float(abs(amp_a - amp_b) ** 2)


def adiabatic_lambda_delta(cfg: CycleConfig) -> Tuple[float, float]:
    a_low = qcore.overlap_coefficients(cfg.params_low)[0]
    a_high = qcore.overlap_coefficients(cfg.params_high)[0]
    return a_high**2 / 2, a_low**2 / 2


def transition_probabilities(cfg: CycleConfig, steps: Optional[int] = None) -> TransitionProbabilities:
    """xi, lambda and delta for the cycle's ramps (adiabatic values at tau = inf)."""
    if cfg.adiabatic:
        lam, delta = adiabatic_lambda_delta(cfg)
        return TransitionProbabilities(xi=0.0, lambda_=lam, delta=delta, tau=cfg.tau)
    spec1 = qcore.spectrum(cfg.params_low)
    spec2 = qcore.spectrum(cfg.params_high)
    U, V = ramp_propagators(cfg, steps)
    xi = transition_xi(U, spec1, spec2, V)
    lam, delta = transition_lambda_delta(U, V, spec1, spec2)
    return TransitionProbabilities(xi=xi, lambda_=lam, delta=delta, tau=cfg.tau)
