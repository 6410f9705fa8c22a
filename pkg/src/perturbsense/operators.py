"""Dense complex operator primitives shared by every estimation module.

Hermitian matrices with validated construction, spectral decompositions
with deterministic eigenvector phases, exact unitary evolution through the
spectral form, expectation values, and composite Gauss-Legendre quadrature
of matrix-valued integrands.  All values are immutable after construction
and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    DimensionMismatchError,
    EigensolverError,
    HermiticityError,
    QuadratureError,
)

__all__ = [
    "HermitianOperator",
    "SpectralDecomposition",
    "StateVector",
    "complex_matrix",
    "as_matrix",
    "hermitian_eig",
    "evolve",
    "expectation",
    "integrate_operator",
]

HERMITICITY_RTOL = 1e-12
ORTHONORMALITY_ATOL = 1e-10
NORM_ATOL = 1e-10
NODES_PER_PANEL = 8
PANELS_PER_UNIT_TIME = 16

_GL_NODES, _GL_WEIGHTS = leggauss(NODES_PER_PANEL)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def complex_matrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a square, finite complex matrix (a fresh copy)."""
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


class HermitianOperator:
    """Square complex matrix verified Hermitian at construction."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        m = complex_matrix(matrix)
        scale = float(np.max(np.abs(m)))
        deviation = float(np.max(np.abs(m - m.conj().T)))
        if deviation > HERMITICITY_RTOL * scale:
            raise HermiticityError(
                f"matrix deviates from Hermiticity by {deviation:.3e} "
                f"relative to max entry {scale:.3e}"
            )
        self._matrix = _frozen(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"cannot add operators of dimension {self.dim} and {other.dim}"
            )
        return HermitianOperator(self._matrix + other._matrix)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self._matrix * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


def as_matrix(operator) -> np.ndarray:
    """Return the ndarray behind either a HermitianOperator or array-like."""
    if isinstance(operator, HermitianOperator):
        return operator.matrix
    return complex_matrix(operator)


class StateVector:
    """Complex amplitude vector; normalized by default, raw for corrections."""

    __slots__ = ("_amplitudes", "_is_normalized")

    def __init__(self, amplitudes, normalized: bool = True):
        v = np.array(amplitudes, dtype=complex)
        if v.ndim != 1 or v.size < 1:
            raise ValueError(f"expected a nonempty 1-d amplitude vector, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be finite")
        if normalized and abs(np.linalg.norm(v) - 1.0) > NORM_ATOL:
            raise ValueError(
                f"state flagged normalized has norm {np.linalg.norm(v):.12f}"
            )
        self._amplitudes = _frozen(v)
        self._is_normalized = bool(normalized)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.size

    @property
    def is_normalized(self) -> bool:
        return self._is_normalized

    def norm(self) -> float:
        return float(np.linalg.norm(self._amplitudes))

    def normalize(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self._amplitudes / n)

    def inner(self, other: "StateVector") -> complex:
        """Return the inner product <self|other>."""
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"inner product of states of dimension {self.dim} and {other.dim}"
            )
        return complex(np.vdot(self._amplitudes, other._amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim}, normalized={self._is_normalized})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vecs = np.asarray(self.eigenvectors, dtype=complex)
        if np.any(np.diff(vals) < 0):
            raise ValueError("eigenvalues must be ascending")
        gram = vecs.conj().T @ vecs
        if np.max(np.abs(gram - np.eye(vecs.shape[1]))) > ORTHONORMALITY_ATOL:
            raise ValueError("eigenvector columns are not orthonormal")
        object.__setattr__(self, "eigenvalues", _frozen(vals))
        object.__setattr__(self, "eigenvectors", _frozen(vecs))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def eigenstate(self, n: int) -> StateVector:
        return StateVector(self.eigenvectors[:, n])

    def propagator(self, t: float) -> np.ndarray:
        """Unitary exp(-i A t) assembled from the spectral data."""
        phases = np.exp(-1j * self.eigenvalues * t)
        return (self.eigenvectors * phases[None, :]) @ self.eigenvectors.conj().T


def hermitian_eig(a: HermitianOperator) -> SpectralDecomposition:
    """Spectral decomposition with ascending eigenvalues and fixed phases.

    Each eigenvector's phase is chosen so that its largest-magnitude
    component is real and positive, which makes the output deterministic
    and keeps finite differences on eigenvector families stable.
    """
    try:
        vals, vecs = np.linalg.eigh(a.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigensolver failed to converge (dim={a.dim}, "
            f"max|A|={np.max(np.abs(a.matrix)):.3e})"
        ) from exc
    pivot_rows = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[pivot_rows, np.arange(vecs.shape[1])]
    vecs = vecs * np.conj(pivots / np.abs(pivots))[None, :]

    scale = max(float(np.max(np.abs(a.matrix))), 1.0)
    residual = np.max(np.abs((vecs * vals[None, :]) @ vecs.conj().T - a.matrix))
    if residual > 1e-10 * scale:
        raise EigensolverError(
            f"spectral reconstruction residual {residual:.3e} exceeds "
            f"1e-10 * {scale:.3e}"
        )
    return SpectralDecomposition(vals, vecs)


def evolve(h: HermitianOperator, t: float, psi: StateVector) -> StateVector:
    """Return exp(-i H t)|psi> computed through the spectral decomposition."""
    if psi.dim != h.dim:
        raise DimensionMismatchError(
            f"state dimension {psi.dim} does not match operator dimension {h.dim}"
        )
    dec = hermitian_eig(h)
    coeffs = dec.eigenvectors.conj().T @ psi.amplitudes
    out = dec.eigenvectors @ (np.exp(-1j * dec.eigenvalues * t) * coeffs)
    return StateVector(out)


def expectation(psi: StateVector, a) -> complex:
    """Return <psi|A|psi> for a square matrix A."""
    m = as_matrix(a)
    if m.shape[0] != psi.dim:
        raise DimensionMismatchError(
            f"operator dimension {m.shape[0]} does not match state dimension {psi.dim}"
        )
    return complex(np.vdot(psi.amplitudes, m @ psi.amplitudes))


def integrate_operator(
    f: Callable[[float], np.ndarray],
    t_lo: float,
    t_hi: float,
    panels: int,
) -> np.ndarray:
    """Composite Gauss-Legendre quadrature of a matrix-valued integrand.

    Uses 8 nodes per panel, which integrates polynomials up to degree 15
    exactly on each panel; the trigonometric integrands in this package
    converge far below 1e-10 at the default panel density.
    """
    if t_hi < t_lo:
        raise ValueError(f"t_hi={t_hi} is below t_lo={t_lo}")
    panels = int(panels)
    if panels < 1:
        raise ValueError("panels must be a positive integer")
    edges = np.linspace(t_lo, t_hi, panels + 1)
    total = None
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            s = mid + half * node
            sample = np.asarray(f(s), dtype=complex)
            if sample.ndim != 2 or sample.shape[0] != sample.shape[1]:
                raise QuadratureError(
                    f"integrand returned non-square shape {sample.shape} at s={s}"
                )
            if not np.all(np.isfinite(sample)):
                raise QuadratureError(f"non-finite integrand sample at s={s}")
            term = (weight * half) * sample
            total = term if total is None else total + term
    return total
