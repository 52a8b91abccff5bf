"""Dense real-matrix spectral machinery.

Eigenvalues, determinants, and inertia counts, plus two structural results
used by the stability analysis: the block-triangular determinant identity
det([[A,B],[0,D]]) = det(A)det(D), and the inertia of a quadratic matrix
polynomial Z(lam) = A lam^2 + B lam + C with positive-definite B, checked
against its companion linearization.

Dense eigensolves are delegated to LAPACK (Hessenberg reduction + shifted
QR), via numpy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolationError, MatrixShapeError

#: Condition number above which the companion linearization warns.
CONDITION_WARN_THRESHOLD = 1e12


@dataclass(frozen=True)
class Spectrum:
    """Full eigenvalue multiset, descending by real part, ties by imag part."""

    eigenvalues: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def abscissa(self) -> float:
        """Maximum real part."""
        return float(np.max(self.eigenvalues.real))


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue counts by sign of real part, with algebraic multiplicity."""

    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def total(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus


def _require_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixShapeError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixShapeError(f"{name} has non-finite entries")
    return a


def _sorted_eigs(vals: np.ndarray) -> np.ndarray:
    order = np.lexsort((vals.imag, -vals.real))
    return vals[order]


def eigenvalues(a: np.ndarray) -> Spectrum:
    """Full spectrum of a square real matrix."""
    a = _require_square(a)
    return Spectrum(_sorted_eigs(np.linalg.eigvals(a)))


def determinant(a: np.ndarray) -> float:
    """Determinant via pivoted LU elimination."""
    a = _require_square(a)
    return float(np.linalg.det(a))


def default_zero_tol(a: np.ndarray) -> float:
    """Zero-real-part tolerance scaled by the matrix's max row sum."""
    a = np.asarray(a, dtype=float)
    scale = max(1.0, float(np.max(np.sum(np.abs(a), axis=1))))
    return 1e-9 * scale


def inertia(a: np.ndarray, tol: float | None = None) -> Inertia:
    """Count eigenvalue real parts against a +-tol band around zero."""
    a = _require_square(a)
    if tol is None:
        tol = default_zero_tol(a)
    return inertia_of_values(eigenvalues(a).eigenvalues, tol)


def inertia_of_values(vals: np.ndarray, tol: float) -> Inertia:
    re = np.asarray(vals).real
    return Inertia(
        n_plus=int(np.sum(re > tol)),
        n_zero=int(np.sum(np.abs(re) <= tol)),
        n_minus=int(np.sum(re < -tol)),
    )


def assemble_block_triangular(a: np.ndarray, b: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Assemble M = [[A, B], [0, D]]."""
    a = _require_square(a, "A")
    d = _require_square(d, "D")
    b = np.asarray(b, dtype=float)
    if b.shape != (a.shape[0], d.shape[0]):
        raise MatrixShapeError(
            f"B must be {a.shape[0]}x{d.shape[0]}, got {b.shape}"
        )
    p, q = a.shape[0], d.shape[0]
    m = np.zeros((p + q, p + q))
    m[:p, :p] = a
    m[:p, p:] = b
    m[p:, p:] = d
    return m


def block_triangular_det_check(a, b, d) -> tuple[float, float, float]:
    """Both sides of det([[A,B],[0,D]]) = det(A)det(D), and their difference.

    The left side is a direct pivoted elimination on the assembled matrix,
    independent of the factored right side.
    """
    m = assemble_block_triangular(a, b, d)
    det_m = determinant(m)
    det_ad = determinant(a) * determinant(d)
    return det_m, det_ad, abs(det_m - det_ad)


def companion_matrix(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Companion linearization [[0, I], [-A^-1 C, -A^-1 B]] of A lam^2 + B lam + C."""
    a = _require_square(a, "A")
    b = _require_square(b, "B")
    c = _require_square(c, "C")
    n = a.shape[0]
    if b.shape[0] != n or c.shape[0] != n:
        raise MatrixShapeError("A, B, C must share one dimension")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or abs(np.linalg.det(a)) == 0.0:
        raise HypothesisViolationError("leading coefficient A is singular")
    if cond > CONDITION_WARN_THRESHOLD:
        warnings.warn(
            f"leading coefficient A is ill-conditioned (cond={cond:.3g})",
            RuntimeWarning,
            stacklevel=2,
        )
    ainv_c = np.linalg.solve(a, c)
    ainv_b = np.linalg.solve(a, b)
    top = np.hstack([np.zeros((n, n)), np.eye(n)])
    bottom = np.hstack([-ainv_c, -ainv_b])
    return np.vstack([top, bottom])


def quadratic_eigenvalues(a, b, c) -> Spectrum:
    """The 2n roots of det(A lam^2 + B lam + C) = 0."""
    return eigenvalues(companion_matrix(a, b, c))


def _is_positive_definite(b: np.ndarray, tol: float) -> bool:
    sym = 0.5 * (b + b.T)
    return bool(np.min(np.linalg.eigvalsh(sym)) > tol)


def quadratic_inertia(a, b, c, tol: float | None = None) -> tuple[Inertia, Inertia]:
    """Predicted vs observed inertia of Z(lam) = A lam^2 + B lam + C.

    Requires nonsingular A and positive-definite B (symmetric part). The
    prediction uses the inertia identities
        pi+(Z) = pi-(A) + pi-(C),
        pi-(Z) = pi+(A) + pi+(C),
        pi0(Z) = pi0(C);
    the observation comes from the companion linearization. Both are
    returned for the caller to compare.
    """
    a = _require_square(a, "A")
    b = _require_square(b, "B")
    c = _require_square(c, "C")
    if tol is None:
        tol = max(default_zero_tol(a), default_zero_tol(b), default_zero_tol(c))
    if not _is_positive_definite(b, tol):
        raise HypothesisViolationError("middle coefficient B is not positive-definite")
    in_a = inertia(a, tol)
    in_c = inertia(c, tol)
    predicted = Inertia(
        n_plus=in_a.n_minus + in_c.n_minus,
        n_zero=in_c.n_zero,
        n_minus=in_a.n_plus + in_c.n_plus,
    )
    observed = inertia_of_values(quadratic_eigenvalues(a, b, c).eigenvalues, tol)
    return predicted, observed


def spectrum_matching_distance(left: np.ndarray, right: np.ndarray) -> float:
    """Optimal-matching multiset distance between two eigenvalue sets.

    Hungarian assignment on pairwise moduli; returns the largest matched
    pair distance. Sets must have equal cardinality.
    """
    from scipy.optimize import linear_sum_assignment

    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    if left.shape != right.shape:
        raise MatrixShapeError(
            f"spectra differ in size: {left.shape} vs {right.shape}"
        )
    cost = np.abs(left[:, None] - right[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols])) if len(rows) else 0.0
