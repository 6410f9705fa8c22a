"""Independent ground truth by exact diagonalization and finite differences.

Nothing in this module uses perturbation theory: eigenstates come from
dense diagonalization with continuity-tracked levels, evolved states from
the exact propagator, and Fisher information from fidelity quotients or
central-difference derivative vectors with an explicit gauge term.  The
estimation engine is validated against these routines.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import FiniteDifferenceError, LevelTrackingError
from .operators import HermitianOperator, StateVector, hermitian_eig
from .perturbation import PerturbationProblem
from .static_estimation import QfiMatrix, UhlmannMatrix

__all__ = [
    "exact_eigenstate",
    "exact_eigenstate_family",
    "fidelity_qfi",
    "fd_qfim",
    "exact_evolved_family",
]

DEFAULT_FD_STEP = 1e-4
PATH_STEPS = 4
FD_DISAGREEMENT_RTOL = 0.1
FD_ABS_FLOOR = 1e-9


def _assemble(h0: HermitianOperator, perturbations, lambdas: np.ndarray) -> np.ndarray:
    perturbations = list(perturbations)
    if len(lambdas) != len(perturbations):
        raise ValueError(
            f"got {len(lambdas)} couplings for {len(perturbations)} perturbations"
        )
    total = np.array(h0.matrix)
    for value, h in zip(lambdas, perturbations):
        total += value * h.matrix
    return total


def exact_eigenstate(
    h0: HermitianOperator,
    perturbations,
    lambdas,
    level: int,
    path_steps: int = PATH_STEPS,
) -> StateVector:
    """Exact eigenvector of h0 + sum lambda_mu H_mu at a tracked level.

    The level is identified by overlap continuity along a straight path
    from lambda = 0 (not by energy ordering, which may change at
    crossings), and the phase is fixed by a positive overlap with the
    unperturbed eigenvector.
    """
    lam = np.asarray(lambdas, dtype=float)
    base = hermitian_eig(h0)
    v0 = base.eigenvectors[:, level]
    v_prev = v0
    for step in range(1, path_steps + 1):
        matrix = _assemble(h0, perturbations, lam * (step / path_steps))
        _, vecs = np.linalg.eigh(matrix)
        projections = np.abs(vecs.conj().T @ v_prev)
        idx = int(np.argmax(projections))
        if projections[idx] ** 2 < 0.5:
            raise LevelTrackingError(
                f"eigenlevel continuity lost at path step {step}/{path_steps} "
                f"(best overlap {projections[idx]:.3f}); increase path_steps"
            )
        v_prev = vecs[:, idx]
    overlap = complex(np.vdot(v0, v_prev))
    if abs(overlap) < 1e-12:
        raise LevelTrackingError("tracked eigenvector is orthogonal to the start")
    return StateVector(v_prev * np.conj(overlap / abs(overlap)))


def exact_eigenstate_family(
    h0: HermitianOperator, perturbations, level: int
) -> Callable[[np.ndarray], StateVector]:
    """Map lambda -> exact tracked eigenstate, for the finite-difference routines."""

    def family(lambdas) -> StateVector:
        return exact_eigenstate(h0, perturbations, lambdas, level)

    return family


def fidelity_qfi(
    family: Callable[[float], StateVector],
    lam: float,
    eps: float,
    richardson: bool = False,
) -> float:
    """QFI from the fidelity quotient 4 [1 - |<psi_-|psi_+>|^2] / eps^2.

    The samples sit at lam -/+ eps/2, so their separation is eps and the
    pure-state expansion |<psi|psi'>|^2 = 1 - Q eps^2 / 4 + O(eps^3)
    fixes the prefactor.  With ``richardson`` the eps and eps/2 quotients
    are extrapolated (the truncation error is quadratic in the step).
    """
    if eps <= 0.0:
        raise ValueError("finite-difference step must be positive")

    def quotient(step: float) -> float:
        lo = family(lam - step / 2.0).amplitudes
        hi = family(lam + step / 2.0).amplitudes
        fidelity = abs(np.vdot(lo, hi)) ** 2
        if not math.isfinite(fidelity):
            raise FiniteDifferenceError("non-finite overlap in fidelity quotient")
        return 4.0 * (1.0 - fidelity) / step**2

    q = quotient(eps)
    if richardson:
        return (4.0 * quotient(eps / 2.0) - q) / 3.0
    return q


def _derivative_moments(
    family, lam: np.ndarray, eps: float, center: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    p = lam.size

    def aligned(v: np.ndarray) -> np.ndarray:
        overlap = complex(np.vdot(center, v))
        if abs(overlap) < 1e-12:
            raise FiniteDifferenceError(
                "family sample orthogonal to the center state; cannot fix phase"
            )
        return v * np.conj(overlap / abs(overlap))

    derivatives = []
    for mu in range(p):
        shift = np.zeros(p)
        shift[mu] = eps / 2.0
        hi = aligned(family(lam + shift).amplitudes)
        lo = aligned(family(lam - shift).amplitudes)
        derivatives.append((hi - lo) / eps)

    geometric = np.empty((p, p), dtype=complex)
    for i in range(p):
        for j in range(p):
            gauge = np.vdot(derivatives[i], center) * np.vdot(derivatives[j], center)
            geometric[i, j] = np.vdot(derivatives[i], derivatives[j]) + gauge
    q = 4.0 * geometric.real
    d = 4.0 * geometric.imag
    return 0.5 * (q + q.T), 0.5 * (d - d.T)


def fd_qfim(
    family: Callable[[np.ndarray], StateVector],
    lam,
    eps: float = DEFAULT_FD_STEP,
) -> tuple[QfiMatrix, UhlmannMatrix]:
    """Central-difference QFIM and Uhlmann curvature of a state family.

    Phases are fixed by positive overlap with the center state and the
    gauge term <d_mu psi|psi><d_nu psi|psi> is included, so the result is
    robust to smooth lambda-dependent phases on the family.  The eps and
    eps/2 estimates must agree within 10%, which catches steps small
    enough for catastrophic cancellation; the finer estimate is returned.
    """
    if eps <= 0.0:
        raise ValueError("finite-difference step must be positive")
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1:
        raise ValueError("lambda must be a 1-d coupling vector")
    center = family(lam).amplitudes

    q_coarse, d_coarse = _derivative_moments(family, lam, eps, center)
    q_fine, d_fine = _derivative_moments(family, lam, eps / 2.0, center)

    scale = max(float(np.max(np.abs(q_fine))), float(np.max(np.abs(d_fine))), FD_ABS_FLOOR)
    disagreement = max(
        float(np.max(np.abs(q_coarse - q_fine))),
        float(np.max(np.abs(d_coarse - d_fine))),
    )
    if disagreement > FD_DISAGREEMENT_RTOL * scale:
        raise FiniteDifferenceError(
            f"step-halving disagreement {disagreement:.3e} exceeds 10% of "
            f"scale {scale:.3e}; adjust eps"
        )
    return QfiMatrix(q_fine), UhlmannMatrix(d_fine)


def exact_evolved_family(
    p: PerturbationProblem, psi0: StateVector, t: float
) -> Callable[[np.ndarray], StateVector]:
    """Map lambda -> exp(-i H(lambda) t)|psi0> by exact diagonalization."""
    amplitudes = psi0.amplitudes

    def family(lambdas) -> StateVector:
        lam = np.asarray(lambdas, dtype=float)
        matrix = _assemble(p.h0, p.perturbations, lam)
        vals, vecs = np.linalg.eigh(matrix)
        coeffs = vecs.conj().T @ amplitudes
        return StateVector(vecs @ (np.exp(-1j * vals * t) * coeffs))

    return family
