"""Spectral verification of the adaptive closed loop and trajectory checks.

The transformed emulator coordinates stack pairwise differences from agent 0
with the emulator-state sum c_hat. Removing the c_hat row/column from the
transformed Laplacian dynamics leaves a Hurwitz block A1; stacking it with
the (x_tilde, w_tilde) error dynamics gives the augmented matrix

    M = [[A1, A2,        0   ],
         [0,  -Delta,    -I  ],
         [0,  alpha I,   0   ]]

whose spectral abscissa certifies exponential stability. The quadratic
polynomial lam^2 I + lam Delta + alpha I is the characteristic polynomial of
the error block; its inertia must be (0, 0, 2n).

Trajectory-side checks cover the energy function
E = 0.5 x_tilde'x_tilde + w_tilde'w_tilde/(2 alpha) (nonincreasing, with
dE/dt = -x_tilde' Delta x_tilde), the transient bound
||x_tilde||_2 <= ||w_tilde(0)||_2 / sqrt(alpha), and the boundedness of the
emulator centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraphError, MatrixShapeError, ScenarioError
from .dynamics import ADAPTIVE, Trajectory, error_series
from .graph import Graph, adjacency_matrix, degree_matrix, is_connected, laplacian
from .spectral import (
    Inertia,
    Spectrum,
    eigenvalues,
    inertia_of_values,
    quadratic_inertia,
    spectrum_matching_distance,
)

DEFAULT_SPECTRAL_TOL = 1e-8


@dataclass(frozen=True)
class AgreementTransform:
    """Change of coordinates to (pairwise differences from agent 0, sum)."""

    t_matrix: np.ndarray
    t_inverse: np.ndarray


@dataclass(frozen=True)
class AugmentedSystem:
    """The (3n-1)-dimensional closed-loop matrix M and its building blocks."""

    m_matrix: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    alpha: float


@dataclass(frozen=True)
class StabilityReport:
    spectrum: Spectrum
    spectral_abscissa: float
    theorem_verdict: bool
    decomposition_residual: float
    quadratic_inertia_predicted: Inertia
    quadratic_inertia_observed: Inertia
    tol: float


def build_transform(n: int) -> AgreementTransform:
    """Transform matrix: rows 0..n-2 map x to x_0 - x_i, last row sums."""
    if n < 2:
        raise MatrixShapeError("transform needs n >= 2")
    t = np.zeros((n, n))
    for i in range(1, n):
        t[i - 1, 0] = 1.0
        t[i - 1, i] = -1.0
    t[n - 1, :] = 1.0
    t_inv = np.linalg.inv(t)
    if np.max(np.abs(t @ t_inv - np.eye(n))) > 1e-10:
        raise MatrixShapeError("transform inverse failed the round-trip check")
    return AgreementTransform(t_matrix=t, t_inverse=t_inv)


def reduced_blocks(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Blocks of the transformed emulator dynamics.

    A1 is the leading (n-1)x(n-1) block of -T L T^-1 (the difference
    coordinates; the sum row and column vanish because 1'L = 0 and
    L 1 = 0). A2 is the first n-1 rows of T A, feeding the emulator
    mismatch into the difference dynamics.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("reduced blocks require a connected graph")
    n = g.n
    tr = build_transform(n)
    full = -tr.t_matrix @ laplacian(g) @ tr.t_inverse
    a1 = full[: n - 1, : n - 1]
    a2 = (tr.t_matrix @ adjacency_matrix(g))[: n - 1, :]
    return a1, a2


def build_m(g: Graph, alpha: float) -> AugmentedSystem:
    """Assemble the augmented closed-loop matrix M."""
    if alpha <= 0:
        raise ScenarioError(f"alpha must be positive, got {alpha}")
    a1, a2 = reduced_blocks(g)
    n = g.n
    dim = 3 * n - 1
    m = np.zeros((dim, dim))
    m[: n - 1, : n - 1] = a1
    m[: n - 1, n - 1 : 2 * n - 1] = a2
    m[n - 1 : 2 * n - 1, n - 1 : 2 * n - 1] = -degree_matrix(g)
    m[n - 1 : 2 * n - 1, 2 * n - 1 :] = -np.eye(n)
    m[2 * n - 1 :, n - 1 : 2 * n - 1] = alpha * np.eye(n)
    return AugmentedSystem(m_matrix=m, a1=a1, a2=a2, alpha=alpha)


def error_block(g: Graph, alpha: float) -> np.ndarray:
    """The decoupled (x_tilde, w_tilde) dynamics [[-Delta, -I], [alpha I, 0]]."""
    n = g.n
    return np.block(
        [
            [-degree_matrix(g), -np.eye(n)],
            [alpha * np.eye(n), np.zeros((n, n))],
        ]
    )


def verify_theorem(g: Graph, alpha: float, tol: float = DEFAULT_SPECTRAL_TOL) -> StabilityReport:
    """Spectral stability certificate for the adaptive closed loop.

    The verdict is true iff every eigenvalue of M has real part below -tol.
    Cross-checks: the spectrum of M must decompose into spec(A1) union the
    error-block spectrum (block-triangular structure), and the quadratic
    polynomial lam^2 I + lam Delta + alpha I must have inertia (0, 0, 2n).
    """
    if not is_connected(g):
        raise DisconnectedGraphError("theorem hypotheses require a connected graph")
    if alpha <= 0:
        raise ScenarioError(f"alpha must be positive, got {alpha}")
    aug = build_m(g, alpha)
    spec_m = eigenvalues(aug.m_matrix)
    abscissa = spec_m.abscissa
    spec_a1 = eigenvalues(aug.a1).eigenvalues
    spec_err = eigenvalues(error_block(g, alpha)).eigenvalues
    residual = spectrum_matching_distance(
        spec_m.eigenvalues, np.concatenate([spec_a1, spec_err])
    )
    n = g.n
    predicted, observed = quadratic_inertia(
        np.eye(n), degree_matrix(g), alpha * np.eye(n)
    )
    return StabilityReport(
        spectrum=spec_m,
        spectral_abscissa=abscissa,
        theorem_verdict=bool(abscissa < -tol),
        decomposition_residual=residual,
        quadratic_inertia_predicted=predicted,
        quadratic_inertia_observed=observed,
        tol=tol,
    )


def energy(x_tilde: np.ndarray, w_tilde: np.ndarray, alpha: float) -> float:
    """E = 0.5 ||x_tilde||^2 + ||w_tilde||^2 / (2 alpha)."""
    if alpha <= 0:
        raise ScenarioError(f"alpha must be positive, got {alpha}")
    x_tilde = np.asarray(x_tilde, dtype=float)
    w_tilde = np.asarray(w_tilde, dtype=float)
    return float(0.5 * x_tilde @ x_tilde + (w_tilde @ w_tilde) / (2.0 * alpha))


def energy_series(traj: Trajectory, w: np.ndarray, alpha: float) -> np.ndarray:
    x_t, w_t = error_series(traj, w)
    return 0.5 * np.sum(x_t * x_t, axis=1) + np.sum(w_t * w_t, axis=1) / (2.0 * alpha)


def check_energy_decay(
    traj: Trajectory, w: np.ndarray, alpha: float
) -> tuple[float, np.ndarray]:
    """Monotonicity and derivative check of the energy along a trajectory.

    Returns the largest per-step energy increase (should be ~0 up to
    integration error) and the residual series between the forward
    difference of E and the analytic rate -x_tilde' Delta x_tilde
    (trapezoid-averaged across the step, so the residual is O(dt^2)).
    """
    e = energy_series(traj, w, alpha)
    dt = float(traj.times[1] - traj.times[0])
    max_increase = float(np.max(np.diff(e))) if len(e) > 1 else 0.0
    x_t, _ = error_series(traj, w)
    deg = traj.graph.degrees.astype(float)
    rate = -np.sum(deg[None, :] * x_t * x_t, axis=1)
    forward = np.diff(e) / dt
    midpoint_rate = 0.5 * (rate[:-1] + rate[1:])
    residual = np.abs(forward - midpoint_rate)
    return max_increase, residual


def check_perturbation_bound(
    traj: Trajectory, w: np.ndarray, alpha: float
) -> tuple[float, float, bool]:
    """Measured sup ||x_tilde||_2 against the bound ||w_tilde(0)||_2/sqrt(alpha).

    Returns (sup, bound, assumption_ok); assumption_ok is False when the
    run starts with a nonzero emulator mismatch, which the bound's
    derivation excludes. Flagged, not failed.
    """
    x_t, w_t = error_series(traj, w)
    sup = float(np.max(np.linalg.norm(x_t, axis=1)))
    bound = float(np.linalg.norm(w_t[0]) / np.sqrt(alpha))
    assumption_ok = bool(np.allclose(x_t[0], 0.0, atol=1e-12))
    return sup, bound, assumption_ok


@dataclass(frozen=True)
class CentroidAnalysis:
    c_series: np.ndarray
    sup_abs: float
    derivative_residual: float
    tail_drift: float
    final_agreement_gap: float


def centroid_analysis(traj: Trajectory, w: np.ndarray) -> CentroidAnalysis:
    """Emulator-centroid behavior: c_hat = sum of emulator states.

    Its rate is sum_i d_i x_tilde_i; since the mismatch decays
    exponentially, c_hat converges and the agreement value equals its
    limit divided by n.
    """
    c = np.sum(traj.x_hat, axis=1)
    dt = float(traj.times[1] - traj.times[0])
    x_t, _ = error_series(traj, w)
    deg = traj.graph.degrees.astype(float)
    rate = np.sum(deg[None, :] * x_t, axis=1)
    forward = np.diff(c) / dt
    midpoint = 0.5 * (rate[:-1] + rate[1:])
    deriv_residual = float(np.max(np.abs(forward - midpoint))) if len(c) > 1 else 0.0
    half = len(c) // 2
    tail_drift = abs(float(c[-1] - c[half]))
    final_agreement = float(np.mean(traj.x[-1]))
    gap = abs(final_agreement - float(c[-1]) / traj.graph.n)
    return CentroidAnalysis(
        c_series=c,
        sup_abs=float(np.max(np.abs(c))),
        derivative_residual=deriv_residual,
        tail_drift=tail_drift,
        final_agreement_gap=gap,
    )


def transformed_error_norms(traj: Trajectory, w: np.ndarray) -> np.ndarray:
    """Norm of xi = (z1, x_tilde, w_tilde) per sample, the coordinates in
    which the closed loop is dxi/dt = M xi."""
    n = traj.graph.n
    tr = build_transform(n)
    z = (tr.t_matrix @ traj.x_hat.T).T[:, : n - 1]
    x_t, w_t = error_series(traj, w)
    xi = np.hstack([z, x_t, w_t])
    return np.linalg.norm(xi, axis=1)


def fit_decay_rate(
    traj: Trajectory,
    w: np.ndarray,
    window: tuple[float, float] = (1e-8, 1e-2),
) -> float:
    """Least-squares slope of log ||xi(t)|| over the late-decay window.

    The window keeps samples with ||xi|| between window[0] and window[1]
    times ||xi(0)||, where the slowest mode dominates.
    """
    if traj.config.protocol != ADAPTIVE:
        raise ScenarioError("decay-rate fit applies to adaptive runs")
    norms = transformed_error_norms(traj, w)
    n0 = norms[0]
    if n0 == 0.0:
        raise ScenarioError("initial transformed error is zero; nothing to fit")
    lo, hi = window[0] * n0, window[1] * n0
    mask = (norms >= lo) & (norms <= hi)
    if np.sum(mask) < 2:
        raise ScenarioError("decay window is empty; run is too short")
    t = traj.times[mask]
    y = np.log(norms[mask])
    slope = np.polyfit(t, y, 1)[0]
    return float(slope)
