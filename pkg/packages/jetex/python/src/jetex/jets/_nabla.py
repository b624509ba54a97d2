"""Transversal derivative jets of holomorphic liftings in flat model setups.

Two extraction routes are supported:

1. Samples on a spectral grid: Taylor coefficients are weighted projections
   onto monomials, which are orthogonal on discs, excised discs and bidiscs.
2. A callable lifting: Cauchy integrals on a torus, evaluated by FFT at two
   radii so that non-holomorphic input is detected.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from jetex._config import get_lab_config
from jetex._errors import NonHolomorphicError, PreconditionError, UnsupportedGeometryError
from jetex._sentinel import MISSING, MissingType
from jetex.model import (
    ModelDomain,
    MultiIndex,
    PolarLayout,
    QuadGrid,
    angular_modes,
    holomorphy_residual,
    make_grid,
    multiindices_upto,
    point_grid,
)

from ._data import JetData, NablaJet

Lift = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FlatSetup:
    """Flat ambient metric with a linear submanifold through the domain center.

    ``Y = {center}`` when ``r`` equals the ambient dimension, otherwise
    ``Y = {z_1 = c_1}`` inside a bidisc.

    Attributes:
        grid: Ambient quadrature grid
        r: Codimension of Y
    """

    grid: QuadGrid
    r: int = 1

    def __post_init__(self) -> None:
        domain = self.grid.domain
        n = domain.ambient_dim
        if not 1 <= self.r <= n:
            raise PreconditionError(f"Codimension r={self.r} impossible in dimension {n}")
        if domain.kind == "annulus":
            raise UnsupportedGeometryError("Y through the center is not inside an annulus")
        if self.r < n and domain.kind != "polydisc":
            raise UnsupportedGeometryError(
                f"Y = {{z1 = c1}} is only modelled in a polydisc, not in {domain.kind}"
            )

    @property
    def is_point(self) -> bool:
        return self.r == self.grid.domain.ambient_dim

    @cached_property
    def y_grid(self) -> QuadGrid:
        """Counting measure on a point, or the z2-disc grid of the bidisc slice."""
        domain = self.grid.domain
        if self.is_point:
            return point_grid(domain.center)
        res = self.grid.resolution
        slice_domain = ModelDomain.disc(domain.radii[1], domain.center[1])
        return make_grid(slice_domain, (res[2], res[3]))

    @property
    def torus_radius(self) -> float:
        """Radius of the Cauchy circles used for callable liftings."""
        domain = self.grid.domain
        if domain.kind == "polydisc":
            return 0.5 * (min(domain.radii) if self.is_point else domain.radii[0])
        return 0.5 * domain.outer_radius


def _projection_coefficients(
    points: np.ndarray,
    weights: np.ndarray,
    values: np.ndarray,
    indices: list[MultiIndex],
) -> np.ndarray:
    """``<f, w^alpha> / <w^alpha, w^alpha>`` for every alpha; ``values`` is ``(N, M)``."""
    out = np.empty((len(indices), values.shape[1]), dtype=complex)
    for row, alpha in enumerate(indices):
        mono = alpha.monomial(points)
        mass = float(np.dot(weights, np.abs(mono) ** 2))
        out[row] = np.conj(mono * weights) @ values / mass
    return out


def _from_samples(setup: FlatSetup, values: np.ndarray, k: int, tol: float) -> JetData:
    grid = setup.grid
    if not grid.layouts:
        raise UnsupportedGeometryError(
            f"Sampled liftings need a spectral grid; {grid.domain.kind} has none"
        )
    residual = holomorphy_residual(grid, values)
    if residual > tol:
        raise NonHolomorphicError(
            f"Lifting is not holomorphic: relative dbar residual {residual:.3g} > {tol:.3g}"
        )
    indices = multiindices_upto(setup.r, k)
    center = np.asarray(grid.domain.center)

    if setup.is_point:
        coeffs = _projection_coefficients(
            grid.nodes - center, grid.weights, values[:, None], indices
        )
    else:
        first: PolarLayout = grid.layouts[0]
        n_first = first.n_radii * first.n_theta
        blocks = values.reshape(n_first, -1)
        w1 = first.area_weights().reshape(-1)
        z1 = (first.points().reshape(-1) - center[0])[:, None]
        coeffs = _projection_coefficients(z1, w1, blocks, indices)
    return JetData(setup.r, k, dict(zip(indices, coeffs, strict=True)))


def _torus_coefficients(
    lift: Lift, setup: FlatSetup, k: int, radius: float, n_theta: int
) -> np.ndarray:
    """Cauchy coefficients ``(n_indices, M)`` on circles (or a torus) of ``radius``."""
    angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
    circle = radius * np.exp(1j * angles)
    center = np.asarray(setup.grid.domain.center)
    indices = multiindices_upto(setup.r, k)

    if setup.is_point and setup.r == 2:
        w1, w2 = np.meshgrid(circle, circle, indexing="ij")
        pts = np.stack([w1.reshape(-1), w2.reshape(-1)], axis=1) + center
        spectrum = np.fft.fft2(np.asarray(lift(pts)).reshape(n_theta, n_theta)) / n_theta**2
        return np.array(
            [[spectrum[a.entries[0], a.entries[1]] / radius**a.order] for a in indices]
        )

    y_nodes = setup.y_grid.nodes[:, -1] if not setup.is_point else np.zeros(1)
    out = np.empty((len(indices), len(y_nodes)), dtype=complex)
    for col, y in enumerate(y_nodes):
        if setup.is_point:
            pts = (center[0] + circle)[:, None]
        else:
            pts = np.stack([center[0] + circle, np.full(n_theta, y)], axis=1)
        spectrum = np.fft.fft(np.asarray(lift(pts))) / n_theta
        for row, alpha in enumerate(indices):
            out[row, col] = spectrum[alpha.order] / radius**alpha.order
    return out


def _from_callable(lift: Lift, setup: FlatSetup, k: int, tol: float) -> JetData:
    n_theta = max(get_lab_config().angular_nodes, 4 * (k + 1))
    radius = setup.torus_radius
    outer = _torus_coefficients(lift, setup, k, radius, n_theta)
    inner = _torus_coefficients(lift, setup, k, radius / 2.0, n_theta)
    scale = max(1.0, float(np.max(np.abs(outer))))
    drift = float(np.max(np.abs(outer - inner)))
    if drift > tol * scale * 2.0**k:
        raise NonHolomorphicError(
            f"Cauchy coefficients depend on the circle radius (drift {drift:.3g}): "
            "lifting is not holomorphic"
        )
    indices = multiindices_upto(setup.r, k)
    return JetData(setup.r, k, dict(zip(indices, outer, strict=True)))


def transversal_jet(
    lift: np.ndarray | Lift,
    setup: FlatSetup,
    k: int,
    tol: float | MissingType = MISSING,
) -> NablaJet:
    """Transversal derivatives ``nabla^j f`` (``j <= k``) of a holomorphic lifting.

    Args:
        lift: Samples on ``setup.grid`` or a callable mapping ``(N, n)`` points
            to ``N`` values
        setup: Flat model with linear Y
        k: Jet order
        tol: Holomorphy tolerance (default: lab ``holomorphy_tol``)

    Returns:
        NablaJet on ``setup.y_grid``; two liftings that agree to order k on Y
        give the same result

    Raises:
        NonHolomorphicError: If the lifting fails the holomorphy test
        UnsupportedGeometryError: If the setup is not a spectral flat model

    Example:
        >>> from jetex.model import ModelDomain, make_grid
        >>> setup = FlatSetup(make_grid(ModelDomain.disc(1.0), (16, 32)))
        >>> jet = transversal_jet(setup.grid.z ** 2, setup, 2)
        >>> [round(abs(jet.values[a][0]), 10) for a in jet.values]
        [0.0, 0.0, 2.0]
    """
    if k < 0:
        raise PreconditionError(f"Jet order must be nonnegative, got {k}")
    threshold = get_lab_config().holomorphy_tol if isinstance(tol, MissingType) else float(tol)
    if callable(lift):
        return _from_callable(lift, setup, k, threshold).to_nabla()
    values = np.asarray(lift, dtype=complex)
    if values.shape != (len(setup.grid),):
        raise UnsupportedGeometryError(
            f"Lifting samples must have shape ({len(setup.grid)},), got {values.shape}"
        )
    return _from_samples(setup, values, k, threshold).to_nabla()


def ring_coefficients(
    layout: PolarLayout, values: np.ndarray, k: int, ring: int
) -> np.ndarray:
    """Taylor coefficients ``a_0..a_k`` at the polar center from a single ring.

    Valid when the samples are holomorphic on the disc bounded by that ring.
    ``values`` has shape ``(n_radii, n_theta, ...)``.
    """
    if k >= layout.n_theta // 2:
        raise PreconditionError(f"Order {k} aliases on {layout.n_theta} angular nodes")
    _, modes = angular_modes(layout, values)
    radius = layout.radii[ring]
    return np.stack([modes[ring, m] / radius**m for m in range(k + 1)])


__all__ = ["FlatSetup", "Lift", "ring_coefficients", "transversal_jet"]
