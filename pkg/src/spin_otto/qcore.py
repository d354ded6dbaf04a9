"""Linear-algebra substrate for the two-spin working medium.

Basis ordering is {|00>, |01>, |10>, |11>} with the first tensor factor being
spin 1. The sigma-z convention is sigma_z|0> = -|0>, sigma_z|1> = +|1>, which
makes psi_0, the lower state of the (|00>, |11>) sector, the one with energy
-2k.
"""

from __future__ import annotations

import math
from typing import Literal, Tuple

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, InvalidState, NonPositiveTemperature
from .logs import get_logger
from .models import SpinParams, Spectrum

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)

KET_00, KET_01, KET_10, KET_11 = np.eye(4, dtype=complex)

logger = get_logger("qcore")

HERMITIAN_ATOL = 1e-10
DEGENERATE_K = 1e-14


def spin_operator(op: np.ndarray, site: Literal[1, 2]) -> np.ndarray:
    """Embed a single-spin operator on ``site`` into the two-spin space."""
    return np.kron(op, IDENTITY2) if site == 1 else np.kron(IDENTITY2, op)


def _zeeman() -> np.ndarray:
    return spin_operator(SIGMA_Z, 1) + spin_operator(SIGMA_Z, 2)


def _coupling(gamma: float) -> np.ndarray:
    return (1 + gamma) * np.kron(SIGMA_X, SIGMA_X) + (1 - gamma) * np.kron(SIGMA_Y, SIGMA_Y)


ZEEMAN = _zeeman()


def build_hamiltonian(p: SpinParams) -> np.ndarray:
    """B(s1z + s2z) + J[(1+g) s1x s2x + (1-g) s1y s2y]."""
    H = p.B * ZEEMAN + p.J * _coupling(p.gamma)
    # sigma_y x sigma_y is real, so rounding can only leave a zero imaginary part.
    return np.ascontiguousarray(H.real.astype(complex))


def hamiltonian_stack(fields: np.ndarray, J: float, gamma: float) -> np.ndarray:
    """Hamiltonians for many field values at once, shape (n, 4, 4)."""
    fields = np.asarray(fields, dtype=float)
    base = J * _coupling(gamma).real
    return (fields[:, None, None] * ZEEMAN.real[None] + base[None]).astype(complex)


def overlap_coefficients(p: SpinParams) -> Tuple[float, float, float, float]:
    """Return (a, b, c, d) with psi_0 = (a|11> + b|00>)/sqrt2, psi_3 = (c|11> + d|00>)/sqrt2.

    Uses b = c = sqrt((k+B)/k) and a = -d = -gJ/sqrt(k(k+B)), which stay finite
    at gamma = 0.
    """
    k = p.k
    if k < DEGENERATE_K:
        raise DegenerateSpectrum(f"k = {k:.3e}: psi_0 and psi_3 are undetermined at B = gJ = 0")
    gJ = p.gamma * p.J
    b = math.sqrt((k + p.B) / k)
    d = gJ / math.sqrt(k * (k + p.B))
    return -d, b, b, d


def analytic_spectrum(p: SpinParams) -> Spectrum:
    a, b, c, d = overlap_coefficients(p)
    k = p.k
    s = 1 / math.sqrt(2)
    states = np.zeros((4, 4), dtype=complex)
    states[:, 0] = s * (b * KET_00 + a * KET_11)
    states[:, 1] = s * (KET_01 - KET_10)
    states[:, 2] = s * (KET_01 + KET_10)
    states[:, 3] = s * (d * KET_00 + c * KET_11)
    energies = np.array([-2 * k, -2 * p.J, 2 * p.J, 2 * k])
    return Spectrum(params=p, energies=energies, states=states, k=k)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    fixed = vectors.copy()
    for i in range(fixed.shape[1]):
        col = fixed[:, i]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        fixed[:, i] = col * (abs(first) / first)
    return fixed


def numeric_spectrum(p: SpinParams) -> Spectrum:
    """Dense eigendecomposition fallback; energies sorted ascending."""
    energies, vectors = np.linalg.eigh(build_hamiltonian(p))
    return Spectrum(params=p, energies=energies, states=_fix_phases(vectors), k=p.k)


def spectrum(p: SpinParams) -> Spectrum:
    """Labelled closed-form spectrum, or the dense one where the labels are undetermined."""
    try:
        return analytic_spectrum(p)
    except DegenerateSpectrum as exc:
        logger.warning("numeric spectrum fallback", extra={"stage": "spectrum", "status": exc.detail["message"]})
        return numeric_spectrum(p)


def projector(vector: np.ndarray) -> np.ndarray:
    return np.outer(vector, vector.conj())


def gibbs_state(H: np.ndarray, T: float) -> Tuple[np.ndarray, float]:
    """Return (exp(-H/T)/Z, Z)."""
    if not T > 0:
        raise NonPositiveTemperature(f"temperature must be positive, got {T}")
    energies, vectors = np.linalg.eigh(H)
    shift = energies.min()
    weights = np.exp(-(energies - shift) / T)
    norm = weights.sum()
    rho = (vectors * (weights / norm)) @ vectors.conj().T
    return rho, float(norm * math.exp(-shift / T))


def partition_function(p: SpinParams, T: float) -> float:
    """Closed form 2cosh(2k/T) + 2cosh(2J/T)."""
    if not T > 0:
        raise NonPositiveTemperature(f"temperature must be positive, got {T}")
    return 2 * math.cosh(2 * p.k / T) + 2 * math.cosh(2 * p.J / T)


def _check_square_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} do not match")


def internal_energy(rho: np.ndarray, H: np.ndarray) -> float:
    _check_square_pair(rho, H)
    value = np.einsum("ij,ji->", rho, H)
    if abs(value.imag) > 1e-10:
        raise InvalidState(f"Tr(rho H) has imaginary part {value.imag:.3e}")
    return float(value.real)


def partial_trace(rho: np.ndarray, keep: Literal[1, 2] = 1) -> np.ndarray:
    """Reduced state of spin ``keep`` from a two-spin operator."""
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 operator, got {rho.shape}")
    blocks = rho.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ijkj->ik", blocks)
    return np.einsum("jijk->ik", blocks)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    _check_square_pair(rho, sigma)
    diff = rho - sigma
    eigenvalues = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.abs(eigenvalues).sum())


def validate_state(
    rho: np.ndarray,
    hermitian_atol: float = HERMITIAN_ATOL,
    trace_atol: float = 1e-8,
    eigen_atol: float = 1e-8,
) -> np.ndarray:
    if rho.shape not in ((2, 2), (4, 4)):
        raise DimensionMismatch(f"density matrices are 2x2 or 4x4, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > hermitian_atol:
        raise InvalidState("state is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1) > trace_atol:
        raise InvalidState(f"trace is {trace!r}")
    lowest = np.linalg.eigvalsh(rho).min()
    if lowest < -eigen_atol:
        raise InvalidState(f"negative eigenvalue {lowest:.3e}")
    return rho


def local_hamiltonian(B: float) -> np.ndarray:
    return B * SIGMA_Z


def populations(rho: np.ndarray, spec: Spectrum) -> np.ndarray:
    return np.real(np.einsum("ai,ab,bi->i", spec.states.conj(), rho, spec.states))


def diagonal_state(probabilities: np.ndarray, spec: Spectrum) -> np.ndarray:
    return (spec.states * probabilities) @ spec.states.conj().T


def adiabatic_transport(rho: np.ndarray, spec_from: Spectrum, spec_to: Spectrum) -> np.ndarray:
    """Infinitely slow ramp: populations follow their labelled eigenstate.

    Coherences between instantaneous eigenstates are dropped.
    """
    return diagonal_state(populations(rho, spec_from), spec_to)
