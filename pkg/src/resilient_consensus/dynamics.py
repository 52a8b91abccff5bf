"""Agent dynamics, consensus protocols, and fixed-step integration.

Agents are scalar integrators dx_i/dt = u_i + w_i with a constant
per-agent disturbance w_i. Two protocols are implemented:

* nominal:  u = -L x                  (disturbances uncorrected)
* adaptive: u = -L x - w_hat          (estimated disturbance subtracted)

The adaptive protocol runs a per-agent state emulator
    d(x_hat_i)/dt = -d_i x_hat_i + sum_{j ~ i} x_j
and integrates the emulator mismatch into the disturbance estimate
    d(w_hat_i)/dt = alpha (x_i - x_hat_i),  alpha > 0.

Error conventions used throughout: x_tilde = x - x_hat and
w_tilde = w_hat - w, so the closed-loop error dynamics are
    d(x_tilde)/dt = -Delta x_tilde - w_tilde,
    d(w_tilde)/dt = alpha x_tilde.

Integration is classical fixed-step 4th-order Runge-Kutta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DisconnectedGraphError,
    MatrixShapeError,
    NumericalBlowupError,
    ScenarioError,
)
from .graph import Graph, adjacency_matrix, algebraic_connectivity, degree_matrix, is_connected, laplacian

NOMINAL = "nominal"
ADAPTIVE = "adaptive"

DEFAULT_DT = 0.001


@dataclass(frozen=True)
class SimState:
    """Snapshot of agent states, emulator states, and disturbance estimates."""

    x: np.ndarray
    x_hat: np.ndarray
    w_hat: np.ndarray
    t: float


@dataclass(frozen=True)
class SimConfig:
    """Simulation setup: protocol, gain, step size, horizon, initial vectors.

    x_hat0 defaults to x0 (zero initial emulator mismatch) and w_hat0
    defaults to zero; both may be overridden.
    """

    protocol: str
    dt: float
    t_final: float
    x0: np.ndarray
    alpha: float | None = None
    x_hat0: np.ndarray | None = None
    w_hat0: np.ndarray | None = None

    def __post_init__(self):
        if self.protocol not in (NOMINAL, ADAPTIVE):
            raise ScenarioError(f"unknown protocol {self.protocol!r}")
        if not (self.dt > 0):
            raise ScenarioError(f"dt must be positive, got {self.dt}")
        if self.t_final < self.dt:
            raise ScenarioError("t_final must be at least one step")
        if self.protocol == ADAPTIVE and (self.alpha is None or self.alpha <= 0):
            raise ScenarioError("adaptive protocol requires alpha > 0")
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))

    @property
    def n(self) -> int:
        return len(self.x0)

    def initial_state(self) -> SimState:
        x0 = np.asarray(self.x0, dtype=float)
        if self.protocol == NOMINAL:
            # inert placeholders so Trajectory has one shape
            x_hat0 = np.zeros_like(x0)
            w_hat0 = np.zeros_like(x0)
        else:
            x_hat0 = x0.copy() if self.x_hat0 is None else np.asarray(self.x_hat0, dtype=float)
            w_hat0 = (
                np.zeros_like(x0) if self.w_hat0 is None else np.asarray(self.w_hat0, dtype=float)
            )
        if len(x_hat0) != len(x0) or len(w_hat0) != len(x0):
            raise ScenarioError("x_hat0/w_hat0 length must match x0")
        return SimState(x=x0, x_hat=x_hat0, w_hat=w_hat0, t=0.0)


def default_t_final(g: Graph) -> float:
    """Default horizon: 20 algebraic-connectivity time constants."""
    return 20.0 / algebraic_connectivity(g)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled simulation output: row k is the state at times[k]."""

    times: np.ndarray
    x: np.ndarray
    x_hat: np.ndarray
    w_hat: np.ndarray
    graph: Graph
    config: SimConfig

    def __len__(self):
        return len(self.times)

    def state_at(self, k: int) -> SimState:
        return SimState(
            x=self.x[k], x_hat=self.x_hat[k], w_hat=self.w_hat[k], t=float(self.times[k])
        )


def _check_lengths(g: Graph, *vecs):
    for v in vecs:
        if len(v) != g.n:
            raise MatrixShapeError(f"vector length {len(v)} != node count {g.n}")


def nominal_control(g: Graph, x: np.ndarray) -> np.ndarray:
    """Standard consensus law u = -L x."""
    x = np.asarray(x, dtype=float)
    _check_lengths(g, x)
    return -laplacian(g) @ x


def adaptive_control(g: Graph, x: np.ndarray, w_hat: np.ndarray) -> np.ndarray:
    """Modified consensus law u = -L x - w_hat; the estimate cancels w."""
    x = np.asarray(x, dtype=float)
    w_hat = np.asarray(w_hat, dtype=float)
    _check_lengths(g, x, w_hat)
    return -laplacian(g) @ x - w_hat


def emulator_derivative(g: Graph, x: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
    """Emulator dynamics -Delta x_hat + A x, componentwise
    d(x_hat_i)/dt = -d_i x_hat_i + sum over neighbors of x_j."""
    x = np.asarray(x, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    _check_lengths(g, x, x_hat)
    return -degree_matrix(g) @ x_hat + adjacency_matrix(g) @ x


class _Dynamics:
    """Precomputed right-hand side of the coupled (x, x_hat, w_hat) system."""

    def __init__(self, g: Graph, cfg: SimConfig, w: np.ndarray):
        _check_lengths(g, cfg.x0, w)
        self.n = g.n
        self.lap = laplacian(g)
        self.deg = g.degrees.astype(float)
        self.adj = adjacency_matrix(g)
        self.w = np.asarray(w, dtype=float)
        self.adaptive = cfg.protocol == ADAPTIVE
        self.alpha = cfg.alpha if self.adaptive else 0.0

    def __call__(self, y: np.ndarray) -> np.ndarray:
        n = self.n
        x, x_hat, w_hat = y[:n], y[n : 2 * n], y[2 * n :]
        dy = np.empty_like(y)
        if self.adaptive:
            dy[:n] = -self.lap @ x - w_hat + self.w
            dy[n : 2 * n] = -self.deg * x_hat + self.adj @ x
            dy[2 * n :] = self.alpha * (x - x_hat)
        else:
            dy[:n] = -self.lap @ x + self.w
            dy[n:] = 0.0
        return dy


def system_derivative(g: Graph, cfg: SimConfig, w: np.ndarray, s: SimState) -> SimState:
    """Full time derivative of (x, x_hat, w_hat) under the chosen protocol."""
    y = np.concatenate([s.x, s.x_hat, s.w_hat])
    if not np.all(np.isfinite(y)):
        raise NumericalBlowupError(s.t)
    dy = _Dynamics(g, cfg, w)(y)
    n = g.n
    return SimState(x=dy[:n], x_hat=dy[n : 2 * n], w_hat=dy[2 * n :], t=s.t)


def simulate(g: Graph, cfg: SimConfig, w: np.ndarray) -> Trajectory:
    """Integrate the closed loop with classical RK4 from t=0 to t_final."""
    if not is_connected(g):
        raise DisconnectedGraphError("simulation requires a connected graph")
    f = _Dynamics(g, cfg, w)
    n = g.n
    dt = cfg.dt
    steps = int(round(cfg.t_final / dt))
    s0 = cfg.initial_state()
    y = np.concatenate([s0.x, s0.x_hat, s0.w_hat])
    out = np.empty((steps + 1, 3 * n))
    out[0] = y
    half = 0.5 * dt
    for k in range(steps):
        k1 = f(y)
        k2 = f(y + half * k1)
        k3 = f(y + half * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
        if not np.all(np.isfinite(y)):
            raise NumericalBlowupError((k + 1) * dt)
    times = np.arange(steps + 1) * dt
    return Trajectory(
        times=times,
        x=out[:, :n],
        x_hat=out[:, n : 2 * n],
        w_hat=out[:, 2 * n :],
        graph=g,
        config=cfg,
    )


def error_series(traj: Trajectory, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Emulator mismatch x - x_hat and estimate error w_hat - w per sample."""
    w = np.asarray(w, dtype=float)
    _check_lengths(traj.graph, w)
    return traj.x - traj.x_hat, traj.w_hat - w[None, :]


def consensus_error(x: np.ndarray) -> float:
    """Largest pairwise disagreement max_{i,j} |x_i - x_j|."""
    x = np.asarray(x, dtype=float)
    return float(np.max(x) - np.min(x))


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Trajectory CSV: header t,x_0..,xhat_0..,what_0..; full precision."""
    n = traj.graph.n
    cols = (
        ["t"]
        + [f"x_{i}" for i in range(n)]
        + [f"xhat_{i}" for i in range(n)]
        + [f"what_{i}" for i in range(n)]
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for k in range(len(traj)):
            row = [traj.times[k], *traj.x[k], *traj.x_hat[k], *traj.w_hat[k]]
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_trajectory_csv(path, g: Graph, cfg: SimConfig) -> Trajectory:
    """Read a trajectory CSV back; validates the header against the graph."""
    n = g.n
    expected = (
        ["t"]
        + [f"x_{i}" for i in range(n)]
        + [f"xhat_{i}" for i in range(n)]
        + [f"what_{i}" for i in range(n)]
    )
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != expected:
            raise ScenarioError(f"trajectory CSV header does not match graph with n={n}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != 1 + 3 * n:
                raise ScenarioError(f"trajectory CSV row {lineno} has {len(parts)} fields")
            rows.append([float(p) for p in parts])
    if not rows:
        raise ScenarioError("trajectory CSV has no samples")
    data = np.asarray(rows)
    return Trajectory(
        times=data[:, 0],
        x=data[:, 1 : 1 + n],
        x_hat=data[:, 1 + n : 1 + 2 * n],
        w_hat=data[:, 1 + 2 * n :],
        graph=g,
        config=cfg,
    )
