"""Cauchy transform on polar grids.

The transform ``u0(z) = -(1/pi) int g(w) / (w - z) dA(w)`` is evaluated one
angular mode at a time. Writing ``g = sum_m g_m(r) e^{i m theta}``, the mode
``m`` contributes ``v_m(r) e^{i (m - 1) theta}`` with::

    v_m(r) = -2 int_r^R g_m(p) (r / p)^(m - 1) dp        (m >= 1)
    v_m(r) =  2 int_{r_in}^r g_m(p) (p / r)^(1 - m) dp   (m <= 0)

Both kernels are bounded on their ranges, so no principal value is needed.
The radial integrals use Gauss-Legendre sub-rules on geometric sub-intervals
around the target radius, with ``g_m`` interpolated panel by panel.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import legendre

from jetex._errors import ContractError, PreconditionError
from jetex.model import PolarLayout, QuadGrid, angular_modes, radial_interpolate

from ._problem import DbarProblem

_SUB_ORDER = 16
_GEOMETRIC_RATIO = 2.0
_MAX_LEVELS = 40


def _sub_rule(lo: float, hi: float, cuts: list[float]) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[lo, hi]`` split at ``cuts``."""
    x, w = legendre.leggauss(_SUB_ORDER)
    edges = [lo, *sorted(c for c in set(cuts) if lo < c < hi), hi]
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:], strict=True):
        if b - a <= 0:
            continue
        half = (b - a) / 2.0
        nodes.append(a + half * (x + 1.0))
        weights.append(half * w)
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def _outer_cuts(layout: PolarLayout, r: float) -> list[float]:
    cuts = list(layout.edges)
    point = r * _GEOMETRIC_RATIO
    for _ in range(_MAX_LEVELS):
        if point >= layout.outer:
            break
        cuts.append(point)
        point *= _GEOMETRIC_RATIO
    return cuts


def _inner_cuts(layout: PolarLayout, r: float) -> list[float]:
    cuts = list(layout.edges)
    point = r / _GEOMETRIC_RATIO
    for _ in range(_MAX_LEVELS):
        if point <= layout.inner:
            break
        cuts.append(point)
        point /= _GEOMETRIC_RATIO
    return cuts


def ring_mode_transform(layout: PolarLayout, values: np.ndarray) -> np.ndarray:
    """Cauchy transform of samples shaped ``(n_radii, n_theta)``; same shape out."""
    arr = np.asarray(values, dtype=complex)
    if arr.shape != layout.shape:
        raise ContractError(f"Expected samples of shape {layout.shape}, got {arr.shape}")
    freqs, modes = angular_modes(layout, arr)
    n = layout.n_theta
    if n % 2 == 0:
        modes[:, n // 2] = 0.0
    outer = freqs >= 1
    exponents = freqs.astype(float) - 1.0

    out_modes = np.zeros_like(modes)
    for i, r in enumerate(layout.radii):
        nodes, weights = _sub_rule(r, layout.outer, _outer_cuts(layout, r))
        if len(nodes) and outer.any():
            g = radial_interpolate(layout, modes[:, outer], nodes)
            kernel = (r / nodes[:, None]) ** exponents[outer]
            out_modes[i, outer] = -2.0 * np.sum(weights[:, None] * kernel * g, axis=0)
        nodes, weights = _sub_rule(layout.inner, r, _inner_cuts(layout, r))
        if len(nodes) and (~outer).any():
            g = radial_interpolate(layout, modes[:, ~outer], nodes)
            kernel = (nodes[:, None] / r) ** (-exponents[~outer])
            out_modes[i, ~outer] = 2.0 * np.sum(weights[:, None] * kernel * g, axis=0)

    shifted = np.fft.ifft(out_modes * n, axis=1)
    return shifted * np.exp(-1j * layout.angles)[None, :]


def cauchy_transform(problem: DbarProblem) -> np.ndarray:
    """Particular solution ``u0`` of ``du/dzbar = g`` given by the Cauchy transform.

    Returns:
        ``u0`` at the grid nodes (node order of the problem's grid)

    Example:
        >>> from jetex.model import ModelDomain, make_grid
        >>> grid = make_grid(ModelDomain.disc(1.0), (16, 32))
        >>> u0 = cauchy_transform(DbarProblem.on_grid(grid, 1.0))
        >>> bool(np.allclose(u0, np.conj(grid.z)))
        True
    """
    layout = problem.layout
    return ring_mode_transform(layout, layout.reshape(problem.g)).reshape(-1)


def cauchy_quadrature(
    grid: QuadGrid,
    g: np.ndarray,
    targets: np.ndarray,
    collision_tol: float = 1e-10,
) -> np.ndarray:
    """Direct kernel sum ``-(1/pi) sum_j w_j g_j / (w_j - z)``.

    Targets that coincide with a node skip that node. This is a low-order
    reference for :func:`cauchy_transform`; the kernel singularity limits
    its accuracy to the local node spacing.

    Raises:
        PreconditionError: If a target lies within ``collision_tol`` of a node
            without coinciding with it
    """
    nodes = grid.z
    z = np.atleast_1d(np.asarray(targets, dtype=complex))
    diff = nodes[None, :] - z[:, None]
    dist = np.abs(diff)
    coincident = dist <= 1e-14 * max(1.0, grid.domain.outer_radius)
    near = (dist < collision_tol) & ~coincident
    if near.any():
        raise PreconditionError(
            f"Target within {collision_tol:g} of a quadrature node; move it or refine the grid"
        )
    diff[coincident] = np.inf
    charges = grid.weights * np.asarray(g, dtype=complex)
    return -(1.0 / np.pi) * (1.0 / diff) @ charges


__all__ = ["cauchy_quadrature", "cauchy_transform", "ring_mode_transform"]
