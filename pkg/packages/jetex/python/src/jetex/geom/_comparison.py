"""Comparison estimates: Gronwall, Rauch-type deviation, curvature radius, metric equivalence."""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
from scipy.integrate import solve_ivp

from jetex._config import get_lab_config
from jetex._errors import PreconditionError
from jetex._sentinel import MISSING, MissingType

from ._flow import _exp_differential
from ._models import CURVATURE_NORM, RiemannianModel, _ball_points

CurvatureSample = Callable[[float], float]


def _sin_bound(k: float, t: np.ndarray) -> np.ndarray:
    return np.sin(math.sqrt(k) * t) / math.sqrt(k) if k > 0 else t


def _sinh_bound(k: float, t: np.ndarray) -> np.ndarray:
    return np.sinh(math.sqrt(k) * t) / math.sqrt(k) if k > 0 else t


def rauch_bound(k: float, length: float) -> float:
    """``sinh(sqrt(k) |x|) / (sqrt(k) |x|) - 1``, zero at ``k |x| = 0``.

    Example:
        >>> round(rauch_bound(1.0, 1.0), 6)
        0.175201
    """
    z = math.sqrt(max(k, 0.0)) * length
    return math.sinh(z) / z - 1.0 if z > 0 else 0.0


def gronwall_bounds_check(
    q: CurvatureSample,
    k: float,
    A: float = 1.0,
    T: float | MissingType = MISSING,
    n_samples: int = 201,
    tol: float = 1e-6,
) -> dict[str, Any]:
    """Check ``A sin(sqrt(k) t)/sqrt(k) <= v(t) <= A sinh(sqrt(k) t)/sqrt(k)``.

    ``v`` solves ``v'' = q(t) v`` with ``v(0) = 0``, ``v'(0) = A``. The margins
    are ``min(v - lower)`` and ``min(upper - v)`` over the samples and the gaps
    the largest distances to each bound. ``v < 0`` is reported as a
    precondition failure rather than raised.

    Args:
        q: Curvature sample with ``|q| <= k``
        k: Curvature bound, ``k >= 0``
        A: Initial slope, ``A > 0``
        T: End time, at most ``pi / sqrt(k)`` (default: ``min(1, 0.9 pi / sqrt(k))``)

    Raises:
        PreconditionError: If ``k < 0``, ``A <= 0`` or ``T`` passes the first
            zero of the lower bound

    Example:
        >>> report = gronwall_bounds_check(lambda t: 0.0, k=1.0)
        >>> report["holds"], report["lower_gap"] > 1e-3, report["upper_gap"] > 1e-3
        (True, True, True)
    """
    if k < 0 or A <= 0:
        raise PreconditionError(f"Need k >= 0 and A > 0, got k={k}, A={A}")
    limit = math.pi / math.sqrt(k) if k > 0 else math.inf
    end = min(1.0, 0.9 * limit) if isinstance(T, MissingType) else float(T)
    if not 0 < end <= limit:
        raise PreconditionError(f"T={end} must lie in (0, pi/sqrt(k)] = (0, {limit:.6g}]")

    config = get_lab_config()
    times = np.linspace(0.0, end, n_samples)
    sol = solve_ivp(
        lambda t, y: [y[1], q(t) * y[0]],
        (0.0, end),
        [0.0, A],
        method="DOP853",
        t_eval=times,
        rtol=config.ode_rtol,
        atol=config.ode_atol,
    )
    if not sol.success:
        raise PreconditionError(f"Gronwall integration failed: {sol.message}")
    v = sol.y[0]
    lower = A * _sin_bound(k, times)
    upper = A * _sinh_bound(k, times)
    lower_margin = float(np.min(v - lower))
    upper_margin = float(np.min(upper - v))
    nonnegative = bool(np.all(v >= -tol))
    return {
        "k": k,
        "T": end,
        "lower_margin": lower_margin,
        "upper_margin": upper_margin,
        "lower_gap": float(np.max(np.abs(v - lower))),
        "upper_gap": float(np.max(np.abs(upper - v))),
        "precondition_ok": nonnegative,
        "holds": nonnegative and lower_margin >= -tol and upper_margin >= -tol,
    }


def random_curvature_sample(
    k: float, rng: np.random.Generator, T: float, pieces: int = 8
) -> CurvatureSample:
    """Piecewise-constant ``q`` with values uniform in ``[-k, k]`` on ``pieces`` intervals."""
    levels = rng.uniform(-k, k, size=pieces)

    def q(t: float) -> float:
        return float(levels[min(int(t / T * pieces), pieces - 1)])

    return q


def gronwall_batch(
    k: float,
    n_samples: int = 1000,
    seed: int = 0,
    A: float = 1.0,
    T: float | MissingType = MISSING,
    tol: float = 1e-6,
) -> dict[str, Any]:
    """Run :func:`gronwall_bounds_check` on seeded random curvature samples."""
    limit = math.pi / math.sqrt(k) if k > 0 else math.inf
    end = min(1.0, 0.9 * limit) if isinstance(T, MissingType) else float(T)
    rng = np.random.default_rng(seed)
    reports = [
        gronwall_bounds_check(random_curvature_sample(k, rng, end), k, A, end, tol=tol)
        for _ in range(n_samples)
    ]
    return {
        "k": k,
        "count": n_samples,
        "min_lower_margin": min(r["lower_margin"] for r in reports),
        "min_upper_margin": min(r["upper_margin"] for r in reports),
        "holds": all(r["holds"] for r in reports),
    }


def sample_tangent_ball(dim: int, radius: float, n: int, seed: int = 0) -> np.ndarray:
    """``n`` seeded uniform samples of the ball of ``radius`` in ``R^dim``, shape ``(n, dim)``."""
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / dim)


def rauch_deviation_check(
    model: RiemannianModel,
    m: np.ndarray,
    xs: np.ndarray,
    k_bound: float | MissingType = MISSING,
    tol: float = 1e-6,
) -> dict[str, Any]:
    """Check ``|T_x exp_m - Id| <= sinh(sqrt(k)|x|)/(sqrt(k)|x|) - 1`` (spectral norm).

    ``xs`` holds frame components at ``m``, shape ``(n, d)``. The curvature
    hypothesis ``|K| <= k`` is verified at every sample of every geodesic.

    Returns:
        Dict with per-sample ``deviations`` and ``bounds``, ``max_violation``
        (largest ``deviation - bound``), ``curvature_ok`` and ``holds``
    """
    k = model.k_bound if isinstance(k_bound, MissingType) else float(k_bound)
    samples = np.atleast_2d(np.asarray(xs, dtype=float))
    deviations: list[float] = []
    bounds: list[float] = []
    curvature_ok = True
    for x in samples:
        matrix, fields = _exp_differential(model, m, x)
        if fields is not None:
            path = fields.geodesic.position
            worst = max(abs(model.curvature(p)) for p in path)
            curvature_ok = curvature_ok and worst <= k * (1 + 1e-9) + 1e-12
        deviations.append(float(np.linalg.norm(matrix - np.eye(model.dim), 2)))
        bounds.append(rauch_bound(k, float(np.linalg.norm(x))))
    violation = max((d - b for d, b in zip(deviations, bounds, strict=True)), default=0.0)
    return {
        "model": model.label,
        "k_bound": k,
        "count": len(deviations),
        "deviations": deviations,
        "bounds": bounds,
        "max_violation": violation,
        "curvature_ok": curvature_ok,
        "holds": curvature_ok and violation <= tol,
    }


def curvature_radius(
    model: RiemannianModel,
    y0: np.ndarray,
    a: int = 1,
    max_order: int = 0,
    iterations: int = 60,
) -> dict[str, Any]:
    """``sup{r : r^{2+l} |nabla^l Theta| < 10^{-2a} on B(y0, r), l <= max_order}``.

    Constant curvature gives ``10^{-a} / sqrt(|kappa|)`` in closed form. Other
    models are bisected over coordinate balls. An unbounded radius (flat
    model) is capped at the model radius with a warning.

    Example:
        >>> from jetex.geom import constant_curvature
        >>> round(curvature_radius(constant_curvature(4.0), np.zeros(2))["radius"], 12)
        0.05
    """
    threshold = 10.0 ** (-2 * a)
    center = np.asarray(y0, dtype=float)
    cap = model.radius

    if model.kind in ("flat", "sphere", "hyperbolic"):
        kappa = abs(model.curvature(center))
        radius = 10.0**-a / math.sqrt(kappa) if kappa > 0 else math.inf
    else:

        def admissible(r: float) -> bool:
            points = _ball_points(center, r, n_radii=4, n_angles=16)
            return all(
                r ** (2 + order) * max(model.curvature_norm(p, order) for p in points) < threshold
                for order in range(max_order + 1)
            )

        if admissible(cap):
            radius = math.inf
        else:
            lo, hi = 0.0, cap
            for _ in range(iterations):
                mid = 0.5 * (lo + hi)
                if admissible(mid):
                    lo = mid
                else:
                    hi = mid
            radius = lo

    capped = radius >= cap
    if capped:
        warnings.warn(
            f"Curvature radius of {model.label} is unbounded at a={a}; capped at {cap}",
            UserWarning,
            stacklevel=2,
        )
        radius = cap
    return {
        "model": model.label,
        "radius": radius,
        "capped": capped,
        "a": a,
        "max_order": max_order,
        "convention": CURVATURE_NORM,
    }


def admissible_a(minimum: int = 1, maximum: int = 8) -> dict[str, Any]:
    """Smallest ``a >= minimum`` with ``sinh(10^-a)/10^-a < 2`` and ``<= 3/2``.

    The second condition implies the first; ``a = 0`` is reported alongside
    since it also passes.

    Example:
        >>> report = admissible_a()
        >>> report["a"], round(report["ratio"], 5)
        (1, 1.00167)
    """

    def ratio(a: int) -> float:
        x = 10.0**-a
        return math.sinh(x) / x

    for a in range(minimum, maximum + 1):
        value = ratio(a)
        if value < 2 and value <= 1.5:
            return {
                "a": a,
                "ratio": value,
                "condition_1": value < 2,
                "condition_2": value <= 1.5,
                "a0_ratio": ratio(0),
                "a0_admissible": ratio(0) <= 1.5,
            }
    raise PreconditionError(f"No admissible a in [{minimum}, {maximum}]")


def _directions(dim: int, count: int) -> np.ndarray:
    if dim == 2:
        angles = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    # Fibonacci sphere
    index = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * index / count)
    azimuth = math.pi * (1.0 + math.sqrt(5.0)) * index
    return np.stack(
        [np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)], axis=1
    )


def metric_equivalence_check(
    model: RiemannianModel,
    y0: np.ndarray,
    r: float,
    n_radii: int = 4,
    n_directions: int = 16,
    bounds: Sequence[float] = (0.5, 2.0),
) -> dict[str, Any]:
    """Eigenvalues of the pullback ``(T_v exp)^T g (T_v exp)`` over ``|v| <= r``.

    In parallel-frame coordinates the pullback Gram matrix is ``M^T M``.
    """
    low, high = math.inf, -math.inf
    count = 0
    for rho in np.linspace(0.0, r, n_radii + 1)[1:]:
        for direction in _directions(model.dim, n_directions):
            matrix, _ = _exp_differential(model, y0, rho * direction)
            eigenvalues = np.linalg.eigvalsh(matrix.T @ matrix)
            low = min(low, float(eigenvalues[0]))
            high = max(high, float(eigenvalues[-1]))
            count += 1
    return {
        "model": model.label,
        "radius": r,
        "count": count,
        "min_eigenvalue": low,
        "max_eigenvalue": high,
        "holds": bounds[0] <= low and high <= bounds[1],
    }


__all__ = [
    "CurvatureSample",
    "admissible_a",
    "curvature_radius",
    "gronwall_batch",
    "gronwall_bounds_check",
    "metric_equivalence_check",
    "random_curvature_sample",
    "rauch_bound",
    "rauch_deviation_check",
    "sample_tangent_ball",
]
