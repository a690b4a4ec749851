"""Two-dimensional Hilbert-space machinery for a single spin-1/2.

Operators and states are plain 2x2 complex numpy arrays; the functions here
validate the relevant invariants at the API boundary.  Spin outcomes are
dimensionless +/-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

from .errors import BlochViolationError
from .sphere import Direction

#: Tolerance for Hermiticity, unit trace and positivity checks.
MATRIX_TOL = 1e-12

#: Slack allowed on the Bloch-ball constraint |r| <= 1.
BLOCH_TOL = 1e-12

#: Absolute tolerance when matching an eigenvalue against an outcome set.
EIGENVALUE_MATCH_TOL = 1e-9

#: Eigenvalues closer than this collapse to one degenerate spectral point,
#: which for 2x2 Hermitian matrices only happens for multiples of the identity.
DEGENERACY_TOL = 1e-12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
for _m in (*_PAULIS, IDENTITY):
    _m.setflags(write=False)


def pauli(axis_index: int) -> np.ndarray:
    """Pauli matrix for Cartesian axis 1, 2 or 3 (x, y, z)."""
    if axis_index not in (1, 2, 3):
        raise ValueError(f"axis_index must be 1, 2 or 3, got {axis_index!r}")
    return _PAULIS[axis_index - 1]


def require_hermitian(matrix, tol: float = MATRIX_TOL) -> np.ndarray:
    """Validate and return a 2x2 Hermitian matrix."""
    a = np.asarray(matrix, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if float(np.max(np.abs(a - a.conj().T))) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return a


def require_density(matrix, tol: float = MATRIX_TOL) -> np.ndarray:
    """Validate and return a 2x2 density operator (Hermitian, unit trace, positive)."""
    rho = require_hermitian(matrix, tol)
    trace = complex(rho.trace())
    if abs(trace - 1.0) > tol:
        raise ValueError(f"density operator must have unit trace, got {trace!r}")
    if float(np.linalg.eigvalsh(rho).min()) < -tol:
        raise ValueError("density operator has a negative eigenvalue")
    return rho


def direction_operator(n: Direction) -> np.ndarray:
    """Spin component along n: the Hermitian operator n . sigma, eigenvalues +/-1."""
    c = n.unit_vector
    return c[0] * SIGMA_X + c[1] * SIGMA_Y + c[2] * SIGMA_Z


def state_from_bloch(r) -> np.ndarray:
    """Density operator (I + r . sigma) / 2 for a Bloch vector r with |r| <= 1."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {r.shape}")
    norm_sq = float(r @ r)
    if norm_sq > 1.0 + BLOCH_TOL:
        raise BlochViolationError(
            f"Bloch vector norm {math.sqrt(norm_sq):.12g} exceeds 1: not a physical state"
        )
    return 0.5 * (IDENTITY + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)


def bloch_vector(psi) -> np.ndarray:
    """Bloch vector of a state: component i is Tr[psi sigma_i]."""
    rho = np.asarray(psi, dtype=complex)
    return np.array([float(np.trace(rho @ p).real) for p in _PAULIS])


def purity(psi) -> float:
    """Tr[psi^2]; equals 1 exactly for pure states."""
    rho = np.asarray(psi, dtype=complex)
    return float(np.trace(rho @ rho).real)


def expectation(psi, n: Direction) -> float:
    """Expected spin along n: Tr[psi (n . sigma)], a real number in [-1, 1]."""
    rho = np.asarray(psi, dtype=complex)
    return float(np.trace(rho @ direction_operator(n)).real)


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues in descending order with their orthogonal projectors.

    Projectors are idempotent, mutually orthogonal, and sum to the identity.
    A degenerate pair is collapsed to a single eigenvalue with the rank-2
    projector (the identity).
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]


def spectral_decomposition(matrix) -> Spectrum:
    """Eigenvalues and spectral projectors of a 2x2 Hermitian matrix."""
    a = require_hermitian(matrix)
    evals, vecs = np.linalg.eigh(a)  # ascending order, orthonormal columns
    if float(evals[1] - evals[0]) <= DEGENERACY_TOL:
        return Spectrum((float(evals.mean()),), (IDENTITY.copy(),))
    projectors = tuple(np.outer(vecs[:, k], vecs[:, k].conj()) for k in (1, 0))
    return Spectrum((float(evals[1]), float(evals[0])), projectors)


class Interval(NamedTuple):
    """Closed real interval usable as an outcome set."""

    lower: float
    upper: float


#: An outcome set: either a finite collection of real points or a closed interval.
OutcomeSet = Union[Interval, Iterable[float]]


def _contains(delta: OutcomeSet, y: float, tol: float = EIGENVALUE_MATCH_TOL) -> bool:
    if isinstance(delta, Interval):
        return delta.lower - tol <= y <= delta.upper + tol
    return any(abs(y - float(point)) <= tol for point in delta)


def spectral_projector(matrix, delta: OutcomeSet) -> np.ndarray:
    """Projector onto the eigenvalues of the observable that fall in delta."""
    if not isinstance(delta, Interval):
        delta = tuple(float(p) for p in delta)
    spec = spectral_decomposition(matrix)
    chi = np.zeros((2, 2), dtype=complex)
    for eigenvalue, projector in zip(spec.eigenvalues, spec.projectors):
        if _contains(delta, eigenvalue):
            chi = chi + projector
    return chi


def born_probability(psi, observable, delta: OutcomeSet) -> float:
    """Probability that measuring the observable on psi yields a value in delta.

    Implements Tr[psi chi], with chi the spectral projector of the observable
    onto delta.  An outcome set disjoint from the spectrum gives 0.
    """
    rho = np.asarray(psi, dtype=complex)
    return float(np.trace(rho @ spectral_projector(observable, delta)).real)
