"""Parseval identity and Cauchy-type derivative control on discs."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from jetex._config import get_lab_config
from jetex._errors import NonHolomorphicError, PreconditionError, UnsupportedGeometryError
from jetex._sentinel import MISSING, MissingType
from jetex.model import ModelDomain, QuadGrid, holomorphy_residual, integrate, make_grid

from ._gram import BasisSpec, bergman_projection, gram_matrix
from ._weight import WeightField


def parseval_check(
    coefficients: np.ndarray | list[complex],
    rho: float,
    resolution: tuple[int, int] | MissingType = MISSING,
) -> dict[str, Any]:
    """Compare ``int_{|z|<rho} |F|^2`` with ``pi sum_m |c_m|^2 rho^{2m+2} / (m+1)``.

    ``F = sum_m c_m z^m``. The left side is a quadrature sum, the right side
    the closed form. ``exact_constant`` is the factor ``2 pi rho^2`` that the
    single-variable identity puts in front of ``sum |c_m|^2 rho^{2m} / (2 + 2m)``.

    Example:
        >>> report = parseval_check([0.0, 1.0], 1.0)
        >>> round(report["lhs"] / math.pi, 10), round(report["rhs"] / math.pi, 10)
        (0.5, 0.5)
    """
    if rho <= 0:
        raise PreconditionError(f"rho must be positive, got {rho}")
    coeffs = np.asarray(coefficients, dtype=complex).reshape(-1)
    degree = max(len(coeffs) - 1, 0)
    if isinstance(resolution, MissingType):
        resolution = (degree + 8, max(2 * degree + 8, 16))
    grid = make_grid(ModelDomain.disc(rho), resolution)
    samples = np.polynomial.polynomial.polyval(grid.z, coeffs)
    lhs = float(integrate(grid, np.abs(samples) ** 2))
    m = np.arange(len(coeffs))
    rhs = float(math.pi * np.sum(np.abs(coeffs) ** 2 * rho ** (2 * m + 2) / (m + 1)))
    scale = max(abs(rhs), 1.0)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "residual": abs(lhs - rhs) / scale,
        "exact_constant": 2.0 * math.pi * rho**2,
    }


def taylor_at(coefficients: np.ndarray, offsets: np.ndarray, k: int) -> np.ndarray:
    """Taylor coefficients ``a_m(y)``, ``m <= k``, of ``sum_b c_b (z - c)^b`` at ``y = c + offset``.

    Returns:
        Array with shape ``(len(offsets), k + 1)``
    """
    c = np.asarray(coefficients, dtype=complex)
    y = np.asarray(offsets, dtype=complex).reshape(-1)
    out = np.zeros((len(y), k + 1), dtype=complex)
    for m in range(k + 1):
        for b in range(m, len(c)):
            out[:, m] += c[b] * math.comb(b, m) * y ** (b - m)
    return out


def derivative_control(
    grid: QuadGrid,
    samples: np.ndarray,
    weight: WeightField,
    k: int,
    y_points: np.ndarray | list[complex],
    basis_degree: int = 24,
) -> dict[str, Any]:
    """Measure ``sup_y sum_{m<=k} |a_m(y)|^2 / int |F|^2 e^{-phi}`` on a disc.

    The Taylor coefficients ``a_m(y)`` come from a weighted projection onto
    monomials of degree ``<= basis_degree``. Each point ``y`` is compared with
    the bound obtained from the Parseval identity on the disc ``B(y, rho)``,
    ``rho = R - |y - c|``::

        sum_{m<=k} (m + 1) / (pi rho^{2m+2}) * e^{max_{B(y, rho)} phi}

    The maximum of ``phi`` is taken over grid nodes inside ``B(y, rho)``.

    The same points are also compared with the single-term form::

        Const * 2(1 + k) / rho^{2(1+k)} * e^{min_B phi} * e^{2 eps(rho)}

    where ``eps(rho)`` is half the oscillation of ``phi`` on ``B(y, rho)`` and
    ``Const = (k + 2) / (4 pi)``. For ``rho <= 1`` it dominates the Parseval
    bound, with equality when ``k = 0`` or ``rho = 1``.

    Args:
        grid: Planar grid on a disc
        samples: ``F`` at the grid nodes
        weight: Weight field (its ``phi`` samples are used)
        k: Jet order
        y_points: Points of the inner subset, strictly inside the disc
        basis_degree: Degree of the projection basis

    Returns:
        Dict with ``gamma`` (the measured sup), ``bound`` and ``shape_bound``
        (both bounds at the maximizing point), per-point ``ratios``, ``bounds``,
        ``shape_bounds`` and ``oscillations``, ``within_bound`` and
        ``within_shape_bound``

    Raises:
        NonHolomorphicError: If ``|dbar F|`` exceeds the holomorphy tolerance
        UnsupportedGeometryError: If the grid is not on a disc
        PreconditionError: If a point lies outside the open disc
    """
    domain = grid.domain
    if domain.kind != "disc":
        raise UnsupportedGeometryError(f"derivative_control works on discs, not {domain.kind}")
    values = np.asarray(samples, dtype=complex)
    residual = holomorphy_residual(grid, values)
    tol = get_lab_config().holomorphy_tol
    if residual > tol:
        raise NonHolomorphicError(
            f"F is not holomorphic: |dbar F| residual {residual:.3g} > {tol:.3g}"
        )

    center = domain.center[0]
    y = np.asarray(y_points, dtype=complex).reshape(-1)
    radii = domain.outer_radius - np.abs(y - center)
    if np.any(radii <= 0):
        raise PreconditionError("Every point of the inner subset must lie inside the disc")

    gram = gram_matrix(domain, grid, weight, BasisSpec(basis_degree))
    coefficients, _ = bergman_projection(gram, values)
    taylor = taylor_at(coefficients, y - center, k)
    norm = weight.norm_squared(values)
    if norm == 0:
        ratios = np.zeros(len(y))
    else:
        ratios = np.sum(np.abs(taylor) ** 2, axis=1) / norm

    m = np.arange(k + 1)
    const = (k + 2) / (4.0 * math.pi)
    bounds = np.empty(len(y))
    shape_bounds = np.empty(len(y))
    oscillations = np.empty(len(y))
    for i, (point, radius) in enumerate(zip(y, radii, strict=True)):
        inside = np.abs(grid.z - point) <= radius
        local = weight.phi[inside] if np.any(inside) else weight.phi
        phi_max, phi_min = float(np.max(local)), float(np.min(local))
        bounds[i] = np.sum((m + 1) / (math.pi * radius ** (2 * m + 2))) * math.exp(phi_max)
        oscillations[i] = (phi_max - phi_min) / 2.0
        growth = math.exp(phi_min + 2 * oscillations[i])
        shape_bounds[i] = const * 2 * (1 + k) / radius ** (2 * (1 + k)) * growth

    worst = int(np.argmax(ratios))
    return {
        "gamma": float(ratios[worst]),
        "bound": float(bounds[worst]),
        "shape_bound": float(shape_bounds[worst]),
        "ratios": ratios,
        "bounds": bounds,
        "shape_bounds": shape_bounds,
        "oscillations": oscillations,
        "within_bound": bool(np.all(ratios <= bounds * (1 + 1e-9))),
        "within_shape_bound": bool(np.all(ratios <= shape_bounds * (1 + 1e-9))),
        "holomorphy_residual": residual,
    }


__all__ = ["derivative_control", "parseval_check", "taylor_at"]
