"""Interaction-picture sensing with evolved probes.

Builds the time-integrated interaction operators K_mu(t) (spectral closed
form as the production path, quadrature as an independent cross-check)
and evaluates the leading-order dynamical QFIM, Uhlmann curvature, bound
B(t) and quantumness R(t), plus scans over time grids.

Time ordering in the interaction-picture propagator is dropped: only
first-order terms in the couplings are retained, and the ordering
correction enters at second order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegeneracyError, DimensionMismatchError, SingularQfimError
from .operators import (
    PANELS_PER_UNIT_TIME,
    HermitianOperator,
    SpectralDecomposition,
    StateVector,
    hermitian_eig,
    integrate_operator,
)
from .perturbation import PerturbationProblem, first_order_correction
from .static_estimation import (
    EstimationReport,
    QfiMatrix,
    UhlmannMatrix,
    bound_b,
    qfim_static,
    quantumness_r,
)

__all__ = [
    "KOperator",
    "TimeScan",
    "k_operator_spectral",
    "k_operator_quadrature",
    "qfi_dynamic_single",
    "qfim_dynamic",
    "scan_time",
]


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with sinc(0) = 1 (numpy's sinc is the normalized variant)."""
    return np.sinc(x / np.pi)


@dataclass(frozen=True, eq=False)
class KOperator:
    """Hermitian K_mu(t) = integral_0^t U0^dag(s) H_mu U0(s) ds."""

    op: HermitianOperator
    time: float
    parameter_index: int


@dataclass(frozen=True, eq=False)
class TimeScan:
    """One estimation report per grid time, plus the static bound for comparison."""

    times: np.ndarray
    reports: tuple[EstimationReport, ...]
    static_reference: float | None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        t.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "reports", tuple(self.reports))
        if len(self.reports) != t.size:
            raise ValueError("one report per grid time is required")

    def bound_values(self) -> np.ndarray:
        return np.array([r.bound_b for r in self.reports])


def k_operator_spectral(
    spec: SpectralDecomposition,
    h_mu: HermitianOperator,
    t: float,
    parameter_index: int = 0,
) -> KOperator:
    """K_mu(t) in closed form from the spectral data of H0.

    In the H0 eigenbasis each entry of the integrand oscillates at the
    level gap, so the integral is t * exp(i*gap*t/2) * sinc(gap*t/2)
    entrywise.
    """
    if t < 0.0:
        raise ValueError(f"interaction time must be non-negative, got {t}")
    if h_mu.dim != spec.dim:
        raise DimensionMismatchError(
            f"perturbation dimension {h_mu.dim} does not match H0 dimension {spec.dim}"
        )
    vectors = spec.eigenvectors
    h_eig = vectors.conj().T @ h_mu.matrix @ vectors
    gaps = spec.eigenvalues[:, None] - spec.eigenvalues[None, :]
    kernel = t * np.exp(0.5j * gaps * t) * _sinc(0.5 * gaps * t)
    k_eig = h_eig * kernel
    k = vectors @ k_eig @ vectors.conj().T
    k = 0.5 * (k + k.conj().T)
    return KOperator(op=HermitianOperator(k), time=float(t), parameter_index=parameter_index)


def k_operator_quadrature(
    h0: HermitianOperator,
    h_mu: HermitianOperator,
    t: float,
    panels: int | None = None,
    parameter_index: int = 0,
) -> KOperator:
    """K_mu(t) by Gauss-Legendre quadrature of U0^dag(s) H_mu U0(s).

    Independent of the sinc closed form; kept as a cross-check against
    sign and convention bugs in :func:`k_operator_spectral`.
    """
    if t < 0.0:
        raise ValueError(f"interaction time must be non-negative, got {t}")
    if h_mu.dim != h0.dim:
        raise DimensionMismatchError(
            f"perturbation dimension {h_mu.dim} does not match H0 dimension {h0.dim}"
        )
    if panels is None:
        panels = max(1, math.ceil(PANELS_PER_UNIT_TIME * t))
    dec = hermitian_eig(h0)
    h = h_mu.matrix

    def integrand(s: float) -> np.ndarray:
        u0 = dec.propagator(s)
        return u0.conj().T @ h @ u0

    k = integrate_operator(integrand, 0.0, t, panels)
    k = 0.5 * (k + k.conj().T)
    return KOperator(op=HermitianOperator(k), time=float(t), parameter_index=parameter_index)


def qfi_dynamic_single(psi0: StateVector, k: KOperator) -> float:
    """Leading-order dynamical QFI: 4 times the variance of K(t) in the probe."""
    if psi0.dim != k.op.dim:
        raise DimensionMismatchError(
            f"probe dimension {psi0.dim} does not match K dimension {k.op.dim}"
        )
    kv = k.op.matrix @ psi0.amplitudes
    second_moment = float(np.real(np.vdot(kv, kv)))
    mean = float(np.real(np.vdot(psi0.amplitudes, kv)))
    return max(4.0 * (second_moment - mean * mean), 0.0)


def qfim_dynamic(psi0: StateVector, ks) -> EstimationReport:
    """Leading-order dynamical QFIM, Uhlmann curvature, B and R at one time.

    Q is four times the covariance matrix of the K operators in the probe
    state and D is four times the imaginary part of their cross moments.
    Singular QFIMs yield bound_b = +inf and quantumness_r = None.
    """
    ks = list(ks)
    if len(ks) < 1:
        raise ValueError("at least one K operator is required")
    t0 = ks[0].time
    for k in ks:
        if abs(k.time - t0) > 1e-12 * max(1.0, abs(t0)):
            raise ValueError("all K operators must share one interaction time")
        if k.op.dim != psi0.dim:
            raise DimensionMismatchError(
                f"probe dimension {psi0.dim} does not match K dimension {k.op.dim}"
            )
    kvs = [k.op.matrix @ psi0.amplitudes for k in ks]
    means = [float(np.real(np.vdot(psi0.amplitudes, kv))) for kv in kvs]
    p = len(ks)
    moments = np.empty((p, p), dtype=complex)
    for i in range(p):
        for j in range(p):
            moments[i, j] = np.vdot(kvs[i], kvs[j]) - means[i] * means[j]
    q = 4.0 * moments.real
    d = 4.0 * moments.imag
    qfim = QfiMatrix(0.5 * (q + q.T))
    uhlmann = UhlmannMatrix(0.5 * (d - d.T))
    b = bound_b(qfim)
    try:
        r = quantumness_r(qfim, uhlmann)
    except SingularQfimError:
        r = None
    return EstimationReport(qfim=qfim, uhlmann=uhlmann, bound_b=b, quantumness_r=r)


def _static_reference(p: PerturbationProblem, psi0: StateVector) -> float | None:
    """Static bound B for the eigenlevel matching the probe, if one matches."""
    projections = np.abs(p.spectral.eigenvectors.conj().T @ psi0.amplitudes)
    level = int(np.argmax(projections))
    if projections[level] < 1.0 - 1e-10:
        return None
    try:
        corrections = [
            first_order_correction(replace(p, level=level), mu)
            for mu in range(p.num_parameters)
        ]
    except DegeneracyError:
        return None
    return bound_b(qfim_static(corrections))


def scan_time(p: PerturbationProblem, psi0: StateVector, times) -> TimeScan:
    """Evaluate the dynamical report on an increasing grid of times.

    Singular times are recorded (bound_b = +inf), never fatal.  The
    static reference bound is filled in when the probe coincides with an
    eigenstate of H0, so dynamical and static schemes can be compared.
    """
    grid = np.asarray(times, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("time grid must be a nonempty 1-d array")
    if np.any(grid < 0.0):
        raise ValueError("times must be non-negative")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("time grid must be strictly increasing")
    if psi0.dim != p.dim:
        raise DimensionMismatchError(
            f"probe dimension {psi0.dim} does not match problem dimension {p.dim}"
        )
    dec = p.spectral
    reports = []
    for t in grid:
        ks = [
            k_operator_spectral(dec, h, t, parameter_index=mu)
            for mu, h in enumerate(p.perturbations)
        ]
        reports.append(qfim_dynamic(psi0, ks))
    return TimeScan(
        times=grid,
        reports=tuple(reports),
        static_reference=_static_reference(p, psi0),
    )
