"""Quadrature grids on model domains.

Planar grids are polar tensor grids: Gauss-Legendre in the radius (optionally
split into panels at breakpoints) times the trapezoid rule in the angle. The
tensor structure is kept in :class:`PolarLayout` so spectral operators can act
on samples reshaped to ``(n_radii, n_theta)``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from jetex._config import get_lab_config
from jetex._errors import (
    ContractError,
    EmptyGridError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex._sentinel import MISSING, MissingType

from ._domain import ModelDomain


@dataclass(frozen=True, eq=False)
class PolarLayout:
    """Tensor structure of a planar polar grid.

    Attributes:
        center: Polar origin
        edges: Ascending panel boundaries of the radial interval
        order: Gauss-Legendre nodes per panel
        n_theta: Trapezoid nodes in the angle
        radii: Radial nodes, panel by panel
        radial_weights: Gauss-Legendre weights for ``dr`` (no Jacobian)
        angles: Angular nodes ``2 pi j / n_theta``
    """

    center: complex
    edges: tuple[float, ...]
    order: int
    n_theta: int
    radii: np.ndarray
    radial_weights: np.ndarray
    angles: np.ndarray

    @property
    def n_panels(self) -> int:
        return len(self.edges) - 1

    @property
    def n_radii(self) -> int:
        return len(self.radii)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_radii, self.n_theta)

    @property
    def inner(self) -> float:
        return self.edges[0]

    @property
    def outer(self) -> float:
        return self.edges[-1]

    def panel_slice(self, index: int) -> slice:
        return slice(index * self.order, (index + 1) * self.order)

    def points(self) -> np.ndarray:
        """Complex nodes with shape ``(n_radii, n_theta)``."""
        return self.center + np.outer(self.radii, np.exp(1j * self.angles))

    def area_weights(self) -> np.ndarray:
        """Area weights ``w_r * r * 2 pi / n_theta`` with shape ``(n_radii, n_theta)``."""
        ring = self.radial_weights * self.radii * (2.0 * math.pi / self.n_theta)
        return np.repeat(ring[:, None], self.n_theta, axis=1)

    def reshape(self, samples: np.ndarray) -> np.ndarray:
        arr = np.asarray(samples)
        if arr.shape[0] != self.n_radii * self.n_theta:
            raise ContractError(
                f"Expected {self.n_radii * self.n_theta} samples, got {arr.shape[0]}"
            )
        return arr.reshape((self.n_radii, self.n_theta) + arr.shape[1:])


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """Quadrature nodes and weights on a (possibly excised) model domain.

    Attributes:
        domain: The underlying model domain
        nodes: Complex nodes with shape ``(N, n)``
        weights: Positive quadrature weights with shape ``(N,)``
        resolution: Nodes per radial panel and per angle, for each complex dimension
        excision_radius: Nodes with first coordinate closer than this to the
            polar origin (the center, or the point of a ``star_grid``) were removed
        layouts: Polar layout per complex dimension (empty for ``ball2``)
    """

    domain: ModelDomain
    nodes: np.ndarray
    weights: np.ndarray
    resolution: tuple[int, ...]
    excision_radius: float
    layouts: tuple[PolarLayout, ...] = ()

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def z(self) -> np.ndarray:
        """First complex coordinate of every node."""
        return self.nodes[:, 0]

    @property
    def polar(self) -> PolarLayout:
        """Polar layout of a planar grid.

        Raises:
            PreconditionError: If the grid is not a planar polar grid
        """
        if self.domain.ambient_dim != 1 or not self.layouts:
            raise PreconditionError(f"{self.domain.kind} grid has no planar polar layout")
        return self.layouts[0]

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))


def geometric_breakpoints(lo: float, hi: float, ratio: float = 4.0) -> tuple[float, ...]:
    """Interior breakpoints ``lo * ratio**j`` strictly between ``lo`` and ``hi``.

    Example:
        >>> geometric_breakpoints(0.01, 1.0, ratio=4.0)
        (0.04, 0.16, 0.64)
    """
    if lo <= 0 or hi <= lo or ratio <= 1:
        raise PreconditionError(f"Need 0 < lo < hi and ratio > 1, got {lo}, {hi}, {ratio}")
    points: list[float] = []
    value = lo * ratio
    while value < hi * (1 - 1e-12):
        points.append(value)
        value *= ratio
    return tuple(points)


def _radial_rule(
    lo: float, hi: float, order: int, breakpoints: Sequence[float]
) -> tuple[tuple[float, ...], np.ndarray, np.ndarray]:
    inner = sorted(float(b) for b in breakpoints if lo < b < hi)
    edges = (lo, *inner, hi)
    x, w = legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:], strict=True):
        half = (b - a) / 2.0
        nodes.append(a + half * (x + 1.0))
        weights.append(half * w)
    return edges, np.concatenate(nodes), np.concatenate(weights)


def _polar_layout(
    center: complex,
    lo: float,
    hi: float,
    order: int,
    n_theta: int,
    breakpoints: Sequence[float] = (),
) -> PolarLayout:
    edges, radii, radial_weights = _radial_rule(lo, hi, order, breakpoints)
    angles = 2.0 * math.pi * np.arange(n_theta) / n_theta
    return PolarLayout(
        center=complex(center),
        edges=edges,
        order=order,
        n_theta=n_theta,
        radii=radii,
        radial_weights=radial_weights,
        angles=angles,
    )


def _normalize_resolution(domain: ModelDomain, resolution: Sequence[int] | MissingType):
    config = get_lab_config()
    if resolution is MISSING:
        res = (config.radial_nodes, config.angular_nodes) * domain.ambient_dim
    else:
        res = tuple(int(v) for v in resolution)  # type: ignore[union-attr]
        if len(res) == 2 and domain.ambient_dim == 2:
            res = res * 2
    if len(res) != 2 * domain.ambient_dim:
        raise PreconditionError(
            f"{domain.kind} needs {2 * domain.ambient_dim} resolution entries, got {res}"
        )
    if min(res) < 4:
        raise PreconditionError(f"Resolution must be >= 4 per dimension, got {res}")
    return res


def make_grid(
    domain: ModelDomain,
    resolution: Sequence[int] | MissingType = MISSING,
    excision_radius: float = 0.0,
    breakpoints: Sequence[float] | None = None,
) -> QuadGrid:
    """Build a polar (or polar-product) quadrature grid on ``domain``.

    Args:
        domain: Model domain
        resolution: ``(n_r, n_theta)`` per complex dimension; a single pair is
            reused for both dimensions of a 2-dimensional domain. Defaults to
            the lab configuration.
        excision_radius: Remove nodes whose first coordinate lies within this
            distance of the center (0 keeps the full domain)
        breakpoints: Extra radial panel boundaries for the first coordinate

    Returns:
        QuadGrid whose weights sum to the excised domain volume

    Raises:
        PreconditionError: If any resolution entry is below 4
        EmptyGridError: If the excision swallows the domain

    Example:
        >>> grid = make_grid(ModelDomain.disc(1.0), (32, 64))
        >>> abs(grid.volume - math.pi) < 1e-10
        True
    """
    res = _normalize_resolution(domain, resolution)
    delta = float(excision_radius)
    if delta < 0:
        raise PreconditionError(f"excision_radius must be nonnegative, got {delta}")
    if delta >= domain.outer_radius:
        raise EmptyGridError(
            f"excision_radius {delta} >= domain radius {domain.outer_radius}: no nodes left"
        )
    cuts = tuple(breakpoints or ())
    center = domain.center

    if domain.kind in ("disc", "annulus"):
        lo = max(delta, domain.inner_radius)
        layout = _polar_layout(center[0], lo, domain.outer_radius, res[0], res[1], cuts)
        nodes = layout.points().reshape(-1, 1)
        weights = layout.area_weights().reshape(-1)
        return QuadGrid(domain, nodes, weights, res, delta, (layout,))

    if domain.kind == "polydisc":
        first = _polar_layout(center[0], delta, domain.radii[0], res[0], res[1], cuts)
        second = _polar_layout(center[1], 0.0, domain.radii[1], res[2], res[3])
        z1 = first.points().reshape(-1)
        z2 = second.points().reshape(-1)
        nodes = np.stack(
            [np.repeat(z1, len(z2)), np.tile(z2, len(z1))],
            axis=1,
        )
        weights = np.outer(first.area_weights().reshape(-1), second.area_weights().reshape(-1))
        return QuadGrid(domain, nodes, weights.reshape(-1), res, delta, (first, second))

    return _ball2_grid(domain, res, delta, cuts)


def _ball2_grid(
    domain: ModelDomain, res: tuple[int, ...], delta: float, cuts: tuple[float, ...]
) -> QuadGrid:
    radius = domain.radii[0]
    _, r1, w1 = _radial_rule(delta, radius, res[0], cuts)
    x2, w2 = legendre.leggauss(res[2])
    t1 = 2.0 * math.pi * np.arange(res[1]) / res[1]
    t2 = 2.0 * math.pi * np.arange(res[3]) / res[3]

    blocks_nodes, blocks_weights = [], []
    for rho1, weight1 in zip(r1, w1, strict=True):
        top = math.sqrt(max(radius**2 - rho1**2, 0.0))
        rho2 = top * (x2 + 1.0) / 2.0
        weight2 = w2 * top / 2.0
        ring1 = rho1 * np.exp(1j * t1)
        ring2 = np.outer(rho2, np.exp(1j * t2)).reshape(-1)
        ring2_w = np.repeat(weight2 * rho2 * 2.0 * math.pi / res[3], res[3])
        blocks_nodes.append(
            np.stack([np.repeat(ring1, len(ring2)), np.tile(ring2, len(ring1))], axis=1)
        )
        ring1_w = weight1 * rho1 * 2.0 * math.pi / res[1]
        blocks_weights.append(np.tile(ring1_w * ring2_w, len(ring1)))

    nodes = np.concatenate(blocks_nodes) + np.asarray(domain.center)
    weights = np.concatenate(blocks_weights)
    return QuadGrid(domain, nodes, weights, res, delta, ())


def star_grid(
    domain: ModelDomain,
    point: complex,
    resolution: Sequence[int] | MissingType = MISSING,
    excision_radius: float = 0.0,
    breakpoints: Sequence[float] | None = None,
) -> QuadGrid:
    """Polar grid of a disc around an interior ``point`` instead of the center.

    Along the ray at angle ``theta`` the radius runs from ``excision_radius``
    to the boundary distance ``R(theta)``, with Gauss-Legendre panels split
    at the breakpoints below ``R(theta)``. The grid has no tensor layout.

    Raises:
        UnsupportedGeometryError: If ``domain`` is not a disc
        PreconditionError: If the excised disc around ``point`` leaves the domain

    Example:
        >>> grid = star_grid(ModelDomain.disc(1.0), 0.3, (16, 64))
        >>> abs(grid.volume - math.pi) < 1e-10
        True
    """
    if domain.kind != "disc":
        raise UnsupportedGeometryError(f"star_grid needs a disc, got {domain.kind}")
    res = _normalize_resolution(domain, resolution)
    delta = float(excision_radius)
    offset = complex(point) - domain.center[0]
    radius = domain.outer_radius
    if delta < 0 or abs(offset) + delta >= radius:
        raise PreconditionError(
            f"Excision of radius {delta} around {complex(point)} does not fit in the disc"
        )
    cuts = tuple(breakpoints or ())
    angles = 2.0 * math.pi * np.arange(res[1]) / res[1]
    nodes, weights = [], []
    for angle in angles:
        direction = np.exp(1j * angle)
        along = float(np.real(np.conj(offset) * direction))
        reach = -along + math.sqrt(radius**2 - abs(offset) ** 2 + along**2)
        _, radii, radial_weights = _radial_rule(delta, reach, res[0], cuts)
        nodes.append(complex(point) + radii * direction)
        weights.append(radial_weights * radii * (2.0 * math.pi / res[1]))
    return QuadGrid(
        domain, np.concatenate(nodes).reshape(-1, 1), np.concatenate(weights), res, delta, ()
    )


def point_grid(z0: Sequence[complex] | complex) -> QuadGrid:
    """Counting-measure grid on the 0-dimensional submanifold ``Y = {z0}``."""
    point = np.atleast_1d(np.asarray(z0, dtype=complex))
    domain = (
        ModelDomain.disc(1.0, point[0])
        if len(point) == 1
        else ModelDomain.polydisc(1.0, 1.0, (point[0], point[1]))
    )
    layout_free: tuple[PolarLayout, ...] = ()
    return QuadGrid(domain, point.reshape(1, -1), np.ones(1), (1,), 0.0, layout_free)


def integrate(grid: QuadGrid, samples: np.ndarray | Sequence[complex]) -> complex | float:
    """Quadrature sum ``sum_i weight_i * sample_i``.

    Raises:
        ContractError: If the sample count differs from the node count

    Example:
        >>> grid = make_grid(ModelDomain.disc(1.0), (32, 64))
        >>> abs(integrate(grid, np.abs(grid.z) ** 4) - math.pi / 3) < 1e-9
        True
    """
    values = np.asarray(samples)
    if values.ndim == 0:
        values = np.full(len(grid), values)
    if values.ndim != 1 or values.shape[0] != len(grid):
        raise ContractError(f"Grid has {len(grid)} nodes, got {values.shape[0]} samples")
    total = np.dot(grid.weights, values)
    if np.iscomplexobj(total):
        return complex(total)
    return float(total)


__all__ = [
    "PolarLayout",
    "QuadGrid",
    "geometric_breakpoints",
    "integrate",
    "make_grid",
    "point_grid",
    "star_grid",
]
