"""Riemannian models given in a single coordinate chart.

Every model is isotropic at each point: the sectional curvature ``K(x)``
does not depend on the 2-plane, so ``R(Y, V)V = K (|V|^2 Y - <Y, V> V)``.
This covers all surfaces and the constant-curvature spaces of dimension 3.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy import linalg

from jetex._errors import PreconditionError, UnsupportedGeometryError

PointFunction = Callable[[np.ndarray], float]

# Finite-difference step for curvature of sampled metrics.
FD_STEP = 1e-4
CURVATURE_NORM = "operator norm on 2-planes (constant curvature kappa has norm |kappa|)"


def central_difference(
    fn: Callable[[np.ndarray], np.ndarray | float],
    x: np.ndarray,
    direction: np.ndarray,
    step: float = FD_STEP,
) -> tuple[np.ndarray, float]:
    """Richardson-extrapolated central difference of ``fn`` along ``direction``.

    Returns:
        The estimate and ``max |D(h/2) - D(h)|``, the Richardson check

    Example:
        >>> value, _ = central_difference(lambda p: p[0] ** 3, np.array([1.0]), np.array([1.0]))
        >>> round(float(value), 10)
        3.0
    """
    point = np.asarray(x, dtype=float)
    e = np.asarray(direction, dtype=float)

    def diff(h: float) -> np.ndarray:
        return (np.asarray(fn(point + h * e)) - np.asarray(fn(point - h * e))) / (2 * h)

    coarse = diff(step)
    fine = diff(step / 2)
    return (4 * fine - coarse) / 3, float(np.max(np.abs(fine - coarse)))


def second_difference(
    fn: PointFunction, x: np.ndarray, direction: np.ndarray, step: float = FD_STEP
) -> tuple[float, float]:
    """Richardson-extrapolated second difference along ``direction``, with its check."""
    point = np.asarray(x, dtype=float)
    e = np.asarray(direction, dtype=float)
    center = float(fn(point))

    def diff(h: float) -> float:
        return (float(fn(point + h * e)) - 2 * center + float(fn(point - h * e))) / h**2

    coarse = diff(step)
    fine = diff(step / 2)
    return (4 * fine - coarse) / 3, abs(fine - coarse)


@dataclass(frozen=True, eq=False)
class RiemannianModel:
    """A metric ``g(x)`` on a coordinate chart, with its curvature.

    Attributes:
        kind: ``flat``, ``sphere``, ``hyperbolic``, ``revolution`` or ``perturbed``
        label: Name accepted by :func:`parse_model`
        dim: 2 or 3
        metric_fn: ``x -> g(x)``, shape ``(d, d)``
        metric_derivative_fn: ``x -> dg`` with ``dg[i, j, k] = d g_ij / d x_k``
        curvature_fn: ``x -> K(x)``
        curvature_norm_fn: ``(x, l) -> |nabla^l Theta|(x)``
        k_bound: ``sup |K|`` over the coordinate ball of radius ``radius``
        radius: Coordinate radius of the region the model is checked on
        chart_radius: Coordinate radius where the chart ends (``inf`` if complete)
        fd_error: Largest Richardson check of finite-difference curvature (0 if analytic)
    """

    kind: str
    label: str
    dim: int
    metric_fn: Callable[[np.ndarray], np.ndarray]
    metric_derivative_fn: Callable[[np.ndarray], np.ndarray]
    curvature_fn: PointFunction
    curvature_norm_fn: Callable[[np.ndarray, int], float]
    k_bound: float
    radius: float
    chart_radius: float = math.inf
    fd_error: float = 0.0

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise UnsupportedGeometryError(f"Models have dimension 2 or 3, got {self.dim}")

    def metric(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.metric_fn(np.asarray(x, dtype=float)), dtype=float)

    def christoffel(self, x: np.ndarray) -> np.ndarray:
        """``Gamma[i, j, k]`` such that ``x''_i = -Gamma[i, j, k] x'_j x'_k``."""
        point = np.asarray(x, dtype=float)
        dg = self.metric_derivative_fn(point)
        lowered = (
            np.transpose(dg, (0, 2, 1)) + dg - np.transpose(dg, (2, 0, 1))
        )  # [l, j, k] = d_j g_lk + d_k g_lj - d_l g_jk
        return 0.5 * np.einsum("il,ljk->ijk", np.linalg.inv(self.metric(point)), lowered)

    def curvature(self, x: np.ndarray) -> float:
        return float(self.curvature_fn(np.asarray(x, dtype=float)))

    def curvature_norm(self, x: np.ndarray, order: int) -> float:
        """``|nabla^order Theta|`` at ``x`` in the convention of :data:`CURVATURE_NORM`."""
        if order < 0:
            raise ValueError(f"order must be nonnegative, got {order}")
        return float(self.curvature_norm_fn(np.asarray(x, dtype=float), order))

    def orthonormal_frame(self, x: np.ndarray) -> np.ndarray:
        """Gram-Schmidt of the coordinate axes: columns ``F`` with ``F^T g F = I``.

        Raises:
            PreconditionError: If the metric is not positive definite at ``x``
        """
        try:
            lower = linalg.cholesky(self.metric(x), lower=True)
        except linalg.LinAlgError as e:
            msg = f"Metric of {self.label} is degenerate at {np.asarray(x).tolist()}"
            raise PreconditionError(msg) from e
        return linalg.solve_triangular(lower, np.eye(self.dim), lower=True).T

    def norm(self, x: np.ndarray, v: np.ndarray) -> float:
        vec = np.asarray(v, dtype=float)
        return math.sqrt(float(vec @ self.metric(x) @ vec))


def _conformal_derivative(
    scale: Callable[[np.ndarray], float], gradient: Callable[[np.ndarray], np.ndarray], dim: int
) -> Callable[[np.ndarray], np.ndarray]:
    """``d(e^{2f} I)`` from ``e^{2f}`` and ``grad f``."""

    def derivative(x: np.ndarray) -> np.ndarray:
        return 2.0 * scale(x) * np.einsum("ij,k->ijk", np.eye(dim), gradient(x))

    return derivative


def constant_curvature(kappa: float, dim: int = 2, radius: float = 1.0) -> RiemannianModel:
    """``g = I / (1 + kappa |x|^2 / 4)^2``: curvature ``kappa``, ``g(0) = I``.

    For ``kappa > 0`` the chart is the sphere without the point antipodal to
    the origin; for ``kappa < 0`` it is the ball ``|x| < 2 / sqrt(-kappa)``.

    Example:
        >>> sphere = constant_curvature(1.0)
        >>> sphere.curvature(np.array([0.3, 0.1])), sphere.k_bound
        (1.0, 1.0)
    """
    kappa = float(kappa)
    chart = 2.0 / math.sqrt(-kappa) if kappa < 0 else math.inf
    if radius >= chart:
        raise PreconditionError(f"radius {radius} reaches the chart boundary {chart:.6g}")

    def factor(x: np.ndarray) -> float:
        return 1.0 / (1.0 + kappa * float(x @ x) / 4.0)

    def metric(x: np.ndarray) -> np.ndarray:
        return factor(x) ** 2 * np.eye(dim)

    def log_gradient(x: np.ndarray) -> np.ndarray:
        return -0.5 * kappa * factor(x) * x

    def norms(_x: np.ndarray, order: int) -> float:
        return abs(kappa) if order == 0 else 0.0

    kind = "flat" if kappa == 0 else ("sphere" if kappa > 0 else "hyperbolic")
    label = "flat" if kappa == 0 else f"{kind}:{abs(kappa):g}"
    if dim != 2:
        label = f"{label}:{dim}" if kappa != 0 else f"flat:0:{dim}"
    return RiemannianModel(
        kind=kind,
        label=label,
        dim=dim,
        metric_fn=metric,
        metric_derivative_fn=_conformal_derivative(lambda x: factor(x) ** 2, log_gradient, dim),
        curvature_fn=lambda _x: kappa,
        curvature_norm_fn=norms,
        k_bound=abs(kappa),
        radius=radius,
        chart_radius=chart,
    )


def _revolution_curvature(
    warp_over_r: Polynomial, warp_dd_over_r: Polynomial
) -> Callable[[float, int], list[float]]:
    """``K^(l)(r)`` from ``K (f/r) = -(f''/r)`` differentiated ``l`` times."""

    def derivatives(r: float, order: int) -> list[float]:
        base = float(warp_over_r(r))
        values: list[float] = []
        for level in range(order + 1):
            rhs = -float(warp_dd_over_r.deriv(level)(r))
            for i in range(level):
                rhs -= math.comb(level, i) * values[i] * float(warp_over_r.deriv(level - i)(r))
            values.append(rhs / base)
        return values

    return derivatives


def surface_of_revolution(profile: Sequence[float], radius: float = 1.0) -> RiemannianModel:
    """Rotation surface ``dr^2 + f(r)^2 dtheta^2`` with ``f(r) = r Q(r^2)``.

    ``profile`` lists the coefficients of ``Q`` (``Q(0) = 1``). The metric is
    written in Cartesian coordinates ``x = r (cos theta, sin theta)`` as
    ``g = Q^2 I + w x x^T`` with ``w = (1 - Q^2) / r^2``, both polynomial in
    ``r^2``. Curvature ``K = -f''/f`` and its radial derivatives are exact.

    Example:
        >>> surface = surface_of_revolution([1.0, 0.1])
        >>> round(surface.curvature(np.zeros(2)), 12)
        -0.6
    """
    q = Polynomial(np.asarray(profile, dtype=float))
    if abs(q.coef[0] - 1.0) > 1e-12:
        raise PreconditionError(f"Profile needs Q(0) = 1, got {q.coef[0]}")
    q2 = q**2
    w = Polynomial((1.0 - q2).coef[1:]) if len(q2.coef) > 1 else Polynomial([0.0])
    dq2, dw = q2.deriv(), w.deriv()

    warp = np.zeros(2 * len(q.coef))
    warp[1::2] = q.coef
    f = Polynomial(warp)
    warp_over_r = Polynomial(f.coef[1:])
    second = f.deriv(2)
    warp_dd_over_r = Polynomial(second.coef[1:]) if len(second.coef) > 1 else Polynomial([0.0])
    k_derivatives = _revolution_curvature(warp_over_r, warp_dd_over_r)

    roots = [
        float(np.real(z)) for z in warp_over_r.roots() if abs(np.imag(z)) < 1e-12 and np.real(z) > 0
    ]
    chart = min(roots) if roots else math.inf
    if radius >= chart:
        raise PreconditionError(f"radius {radius} reaches the profile zero at r = {chart:.6g}")

    def metric(x: np.ndarray) -> np.ndarray:
        t = float(x @ x)
        return q2(t) * np.eye(2) + w(t) * np.outer(x, x)

    def derivative(x: np.ndarray) -> np.ndarray:
        t = float(x @ x)
        eye = np.eye(2)
        return (
            2.0 * dq2(t) * np.einsum("ij,k->ijk", eye, x)
            + 2.0 * dw(t) * np.einsum("i,j,k->ijk", x, x, x)
            + w(t) * (np.einsum("ik,j->ijk", eye, x) + np.einsum("jk,i->ijk", eye, x))
        )

    def curvature(x: np.ndarray) -> float:
        return k_derivatives(math.sqrt(float(x @ x)), 0)[0]

    def norms(x: np.ndarray, order: int) -> float:
        return abs(k_derivatives(math.sqrt(float(x @ x)), order)[order])

    samples = np.linspace(0.0, radius, 257)
    k_bound = max(abs(k_derivatives(float(r), 0)[0]) for r in samples)
    return RiemannianModel(
        kind="revolution",
        label="revolution:" + ",".join(f"{c:g}" for c in q.coef[1:]),
        dim=2,
        metric_fn=metric,
        metric_derivative_fn=derivative,
        curvature_fn=curvature,
        curvature_norm_fn=norms,
        k_bound=k_bound,
        radius=radius,
        chart_radius=chart,
    )


def gaussian_bump(amplitude: float = 0.1, width: float = 0.5) -> PointFunction:
    """``h(x) = amplitude * exp(-|x|^2 / (2 width^2))``."""

    def h(x: np.ndarray) -> float:
        return amplitude * math.exp(-float(x @ x) / (2.0 * width**2))

    return h


def _ball_points(
    center: np.ndarray, radius: float, n_radii: int = 8, n_angles: int = 16
) -> list[np.ndarray]:
    """Center plus rings of a planar coordinate ball."""
    points = [np.asarray(center, dtype=float)]
    for rho in np.linspace(0.0, radius, n_radii + 1)[1:]:
        for angle in np.linspace(0.0, 2 * math.pi, n_angles, endpoint=False):
            points.append(points[0] + rho * np.array([math.cos(angle), math.sin(angle)]))
    return points


def perturbed_flat(
    h: PointFunction, radius: float = 1.0, label: str = "perturbed", step: float = FD_STEP
) -> RiemannianModel:
    """Conformally flat surface ``g = e^{2h} I`` with finite-difference curvature.

    ``K = -e^{-2h} Laplacian(h)`` and ``grad h`` use Richardson-extrapolated
    differences with ``step``; the largest Richardson check over the sampled
    ball is kept as ``fd_error``. Curvature derivatives are available to first
    order.
    """
    axes = np.eye(2)

    def gradient(x: np.ndarray) -> np.ndarray:
        return np.array([float(central_difference(h, x, e, step)[0]) for e in axes])

    def curvature_with_check(x: np.ndarray) -> tuple[float, float]:
        parts = [second_difference(h, x, e, step) for e in axes]
        laplacian = sum(p[0] for p in parts)
        return -math.exp(-2.0 * h(x)) * laplacian, max(p[1] for p in parts)

    def curvature(x: np.ndarray) -> float:
        return curvature_with_check(x)[0]

    def norms(x: np.ndarray, order: int) -> float:
        if order == 0:
            return abs(curvature(x))
        if order == 1:
            grad = np.array([float(central_difference(curvature, x, e, step)[0]) for e in axes])
            return math.exp(-h(x)) * float(np.linalg.norm(grad))
        raise UnsupportedGeometryError(
            f"Curvature derivatives of order {order} need an analytic profile"
        )

    checks = [curvature_with_check(p) for p in _ball_points(np.zeros(2), radius)]
    return RiemannianModel(
        kind="perturbed",
        label=label,
        dim=2,
        metric_fn=lambda x: math.exp(2.0 * h(x)) * np.eye(2),
        metric_derivative_fn=_conformal_derivative(
            lambda x: math.exp(2.0 * h(x)), gradient, 2
        ),
        curvature_fn=curvature,
        curvature_norm_fn=norms,
        k_bound=max(abs(k) for k, _ in checks),
        radius=radius,
        fd_error=max(err for _, err in checks),
    )


def parse_model(spec: str, radius: float = 1.0) -> RiemannianModel:
    """Parse model names used by configs and the command line.

    Accepted forms: ``flat``, ``sphere:K``, ``hyperbolic:K`` (curvature
    ``-K``), an optional trailing ``:3`` for dimension 3 on those three,
    ``revolution:a`` (``f(r) = r + a r^3``) and ``bump:A:w`` (perturbed flat
    with a Gaussian conformal factor).

    Raises:
        ValueError: For unknown names

    Example:
        >>> parse_model("hyperbolic:2").curvature(np.zeros(2))
        -2.0
    """
    parts = spec.strip().lower().split(":")
    try:
        if parts[0] in ("flat", "sphere", "hyperbolic"):
            magnitude = float(parts[1]) if len(parts) > 1 and parts[0] != "flat" else 0.0
            dim = int(parts[2]) if len(parts) > 2 else 2
            sign = -1.0 if parts[0] == "hyperbolic" else 1.0
            return constant_curvature(sign * magnitude, dim, radius)
        if parts[0] == "revolution" and len(parts) == 2:
            return surface_of_revolution([1.0, float(parts[1])], radius)
        if parts[0] == "bump" and len(parts) == 3:
            bump = gaussian_bump(float(parts[1]), float(parts[2]))
            return perturbed_flat(bump, radius, label=spec.strip().lower())
    except (IndexError, ValueError) as e:
        msg = f"Malformed model {spec!r}: {e}"
        raise ValueError(msg) from e
    raise ValueError(
        f"Unknown model {spec!r}: expected flat, sphere:K, hyperbolic:K, revolution:a or bump:A:w"
    )


__all__ = [
    "CURVATURE_NORM",
    "FD_STEP",
    "PointFunction",
    "RiemannianModel",
    "central_difference",
    "constant_curvature",
    "gaussian_bump",
    "parse_model",
    "perturbed_flat",
    "second_difference",
    "surface_of_revolution",
]
