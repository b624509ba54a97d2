"""Geodesics, parallel frames and Jacobi fields by adaptive Runge-Kutta."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp

from jetex._config import get_lab_config
from jetex._errors import PreconditionError

from ._models import RiemannianModel

# Largest accepted deviation of |u|_g from 1 for an initial velocity.
UNIT_SPEED_TOL = 1e-9


@dataclass(frozen=True)
class GeodesicState:
    """Position, velocity and parallel frame (columns) at one time."""

    position: np.ndarray
    velocity: np.ndarray
    frame: np.ndarray


@dataclass(frozen=True)
class JacobiState:
    """``Y`` and ``Y'`` in the parallel frame at one time."""

    value: np.ndarray
    derivative: np.ndarray


@dataclass(frozen=True, eq=False)
class GeodesicTrajectory:
    """Samples of a unit-speed geodesic and its parallel frame.

    Attributes:
        t: Sample times, shape ``(n,)``
        position: Coordinates, shape ``(n, d)``
        velocity: Coordinate velocities, shape ``(n, d)``
        frame: Parallel orthonormal frames, shape ``(n, d, d)``
        speed_drift: ``max | |velocity|_g - 1 |``
        frame_drift: ``max |F^T g F - I|``
    """

    t: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    frame: np.ndarray
    speed_drift: float
    frame_drift: float

    def state(self, index: int) -> GeodesicState:
        return GeodesicState(self.position[index], self.velocity[index], self.frame[index])

    @property
    def final(self) -> GeodesicState:
        return self.state(-1)


@dataclass(frozen=True, eq=False)
class JacobiTrajectory:
    """Jacobi fields along a geodesic, in the parallel frame.

    Attributes:
        geodesic: The base geodesic
        values: ``Y(t)``, shape ``(n, d, p)`` for ``p`` fields
        derivatives: ``Y'(t)``, same shape
    """

    geodesic: GeodesicTrajectory
    values: np.ndarray
    derivatives: np.ndarray

    @property
    def norms(self) -> np.ndarray:
        """``|Y(t)|`` per time and field, shape ``(n, p)``."""
        return np.linalg.norm(self.values, axis=1)

    def state(self, index: int, field: int = 0) -> JacobiState:
        return JacobiState(self.values[index, :, field], self.derivatives[index, :, field])


def _integrate(
    model: RiemannianModel,
    m: np.ndarray,
    u: np.ndarray,
    T: float,
    initial_derivatives: np.ndarray | None,
    n_samples: int,
) -> tuple[GeodesicTrajectory, np.ndarray, np.ndarray]:
    """Integrate geodesic, frame and Jacobi fields ``Y(0) = 0`` together."""
    d = model.dim
    start = np.asarray(m, dtype=float)
    velocity = np.asarray(u, dtype=float)
    if start.shape != (d,) or velocity.shape != (d,):
        raise PreconditionError(
            f"m and u need shape ({d},), got {start.shape} and {velocity.shape}"
        )
    if T < 0:
        raise PreconditionError(f"T must be nonnegative, got {T}")
    speed = model.norm(start, velocity)
    if abs(speed - 1.0) > UNIT_SPEED_TOL:
        raise PreconditionError(f"Initial velocity needs |u|_g = 1, got {speed:.12g}")

    frame0 = model.orthonormal_frame(start)
    # Velocity components in the parallel frame stay constant.
    e = frame0.T @ model.metric(start) @ velocity
    fields = np.zeros((d, 0)) if initial_derivatives is None else np.asarray(initial_derivatives)
    p = fields.shape[1]

    def rhs(_t: float, state: np.ndarray) -> np.ndarray:
        x = state[:d]
        v = state[d : 2 * d]
        frame = state[2 * d : 2 * d + d * d].reshape(d, d)
        gamma = model.christoffel(x)
        out = [v, -np.einsum("ijk,j,k->i", gamma, v, v)]
        out.append(-np.einsum("ijk,j,ka->ia", gamma, v, frame).ravel())
        if p:
            offset = 2 * d + d * d
            y = state[offset : offset + d * p].reshape(d, p)
            dy = state[offset + d * p :].reshape(d, p)
            ddy = -model.curvature(x) * (y - np.outer(e, e @ y))
            out.extend([dy.ravel(), ddy.ravel()])
        return np.concatenate(out)

    y0 = np.concatenate(
        [start, velocity, frame0.ravel(), np.zeros(d * p), fields.astype(float).ravel()]
    )
    times = np.linspace(0.0, T, n_samples)
    events = None
    if math.isfinite(model.chart_radius):

        def leave(_t: float, state: np.ndarray) -> float:
            return model.chart_radius - float(np.linalg.norm(state[:d]))

        leave.terminal = True  # type: ignore[attr-defined]
        events = leave

    config = get_lab_config()
    sol = solve_ivp(
        rhs,
        (0.0, T),
        y0,
        method="DOP853",
        t_eval=times,
        rtol=config.ode_rtol,
        atol=config.ode_atol,
        events=events,
    )
    if sol.status == 1:
        raise PreconditionError(f"Geodesic leaves the chart of {model.label} before T={T}")
    if not sol.success:
        raise PreconditionError(f"Geodesic integration failed on {model.label}: {sol.message}")

    states = sol.y.T
    positions = states[:, :d]
    velocities = states[:, d : 2 * d]
    frames = states[:, 2 * d : 2 * d + d * d].reshape(-1, d, d)
    speed_drift = 0.0
    frame_drift = 0.0
    for x, v, frame in zip(positions, velocities, frames, strict=True):
        g = model.metric(x)
        if np.min(np.linalg.eigvalsh(g)) <= 0:
            raise PreconditionError(f"Metric of {model.label} degenerates along the geodesic")
        speed_drift = max(speed_drift, abs(math.sqrt(float(v @ g @ v)) - 1.0))
        frame_drift = max(frame_drift, float(np.max(np.abs(frame.T @ g @ frame - np.eye(d)))))
    trajectory = GeodesicTrajectory(
        sol.t, positions, velocities, frames, speed_drift, frame_drift
    )
    offset = 2 * d + d * d
    values = states[:, offset : offset + d * p].reshape(-1, d, p)
    derivatives = states[:, offset + d * p :].reshape(-1, d, p)
    return trajectory, values, derivatives


def geodesic(
    model: RiemannianModel, m: np.ndarray, u: np.ndarray, T: float, n_samples: int = 65
) -> GeodesicTrajectory:
    """``gamma_u(t) = exp_m(t u)`` for ``0 <= t <= T``, with its parallel frame.

    The frame starts as the Gram-Schmidt orthonormalization of the coordinate
    axes at ``m``. Tolerances come from ``ode_rtol`` and ``ode_atol``.

    Raises:
        PreconditionError: If ``|u|_g != 1``, the metric degenerates, or the
            geodesic leaves the chart

    Example:
        >>> from jetex.geom import constant_curvature
        >>> path = geodesic(constant_curvature(0.0), np.zeros(2), np.array([0.6, 0.8]), 2.0)
        >>> np.round(path.final.position, 10).tolist()
        [1.2, 1.6]
    """
    trajectory, _, _ = _integrate(model, m, u, T, None, n_samples)
    return trajectory


def jacobi_field(
    model: RiemannianModel,
    m: np.ndarray,
    u: np.ndarray,
    v: np.ndarray,
    T: float,
    n_samples: int = 65,
) -> JacobiTrajectory:
    """Jacobi fields with ``Y(0) = 0`` and ``Y'(0) = v`` along ``gamma_u``.

    ``v`` holds frame components at ``m``, shape ``(d,)`` or ``(d, p)`` for
    ``p`` fields at once. The equation ``Y'' + R(Y, gamma')gamma' = 0`` is
    integrated in the parallel frame.
    """
    fields = np.asarray(v, dtype=float)
    if fields.ndim == 1:
        fields = fields[:, None]
    if fields.shape[0] != model.dim:
        raise PreconditionError(f"v needs {model.dim} frame components, got {fields.shape[0]}")
    trajectory, values, derivatives = _integrate(model, m, u, T, fields, n_samples)
    return JacobiTrajectory(trajectory, values, derivatives)


def _exp_differential(
    model: RiemannianModel, m: np.ndarray, x: np.ndarray
) -> tuple[np.ndarray, JacobiTrajectory | None]:
    vec = np.asarray(x, dtype=float)
    length = float(np.linalg.norm(vec))
    if length == 0.0:
        return np.eye(model.dim), None
    start = np.asarray(m, dtype=float)
    u = model.orthonormal_frame(start) @ (vec / length)
    fields = jacobi_field(model, start, u, np.eye(model.dim), length, n_samples=9)
    return fields.values[-1] / length, fields


def exp_differential(model: RiemannianModel, m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``T_x exp_m`` in parallel-frame coordinates.

    ``x`` holds frame components at ``m``. Column ``b`` is ``Y_b(t) / t``
    with ``t = |x|`` and ``Y_b'(0)`` the ``b``-th frame vector; tangent spaces
    are identified by parallel transport along ``gamma``.

    Example:
        >>> from jetex.geom import constant_curvature
        >>> matrix = exp_differential(constant_curvature(1.0), np.zeros(2), np.array([1.0, 0.0]))
        >>> np.round(np.linalg.svd(matrix, compute_uv=False), 4).tolist()
        [1.0, 0.8415]
    """
    return _exp_differential(model, m, x)[0]


def gauss_lemma_check(
    model: RiemannianModel, m: np.ndarray, x: np.ndarray, tol: float = 1e-6
) -> dict[str, Any]:
    """The radial direction is stretched by exactly 1 and stays orthogonal to the rest."""
    vec = np.asarray(x, dtype=float)
    matrix = exp_differential(model, m, vec)
    length = float(np.linalg.norm(vec))
    radial = vec / length if length else np.eye(model.dim)[0]
    image = matrix @ radial
    basis = np.linalg.svd(radial[None, :])[2][1:]  # orthonormal complement of radial
    orthogonality = float(np.max(np.abs(basis @ matrix.T @ image))) if len(basis) else 0.0
    stretch = float(np.linalg.norm(image))
    return {
        "radial_stretch": stretch,
        "deviation": abs(stretch - 1.0),
        "orthogonality": orthogonality,
        "holds": abs(stretch - 1.0) <= tol and orthogonality <= tol,
    }


def frame_orthonormality(
    model: RiemannianModel, m: np.ndarray, u: np.ndarray, T: float, tol: float = 1e-6
) -> dict[str, Any]:
    """Drift of the parallel frame from orthonormality, and of the speed from 1."""
    path = geodesic(model, m, u, T)
    return {
        "frame_drift": path.frame_drift,
        "speed_drift": path.speed_drift,
        "holds": path.frame_drift <= tol and path.speed_drift <= tol,
    }


__all__ = [
    "GeodesicState",
    "GeodesicTrajectory",
    "JacobiState",
    "JacobiTrajectory",
    "exp_differential",
    "frame_orthonormality",
    "gauss_lemma_check",
    "geodesic",
    "jacobi_field",
]
