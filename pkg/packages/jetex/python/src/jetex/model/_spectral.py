"""Spectral calculus on polar grids.

Radial derivatives and interpolation use per-panel Legendre (barycentric)
formulas on the Gauss-Legendre nodes; angular derivatives use the FFT. All
polar operators accept arrays shaped ``(n_radii, n_theta, ...)`` and act on the
two leading axes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from jetex._errors import UnsupportedGeometryError

from ._grid import PolarLayout, QuadGrid


@lru_cache(maxsize=32)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [-1, 1] and their barycentric weights."""
    x, w = legendre.leggauss(order)
    bary = np.sqrt((1.0 - x**2) * w)
    bary[1::2] *= -1.0
    return x, bary


@lru_cache(maxsize=32)
def differentiation_matrix(order: int) -> np.ndarray:
    """Legendre collocation derivative on the reference Gauss-Legendre nodes."""
    x, bary = _reference_rule(order)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    matrix = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(matrix, 0.0)
    np.fill_diagonal(matrix, -matrix.sum(axis=1))
    return matrix


def interpolation_matrix(order: int, queries: np.ndarray) -> np.ndarray:
    """Rows of Lagrange weights mapping node values to values at ``queries`` in [-1, 1]."""
    x, bary = _reference_rule(order)
    q = np.asarray(queries, dtype=float).reshape(-1)
    diff = q[:, None] - x[None, :]
    exact = np.isclose(diff, 0.0, atol=1e-15)
    diff[exact] = 1.0
    terms = bary[None, :] / diff
    rows = terms / terms.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if hit.any():
        rows[hit] = exact[hit].astype(float)
    return rows


def _along(vec: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = len(vec)
    return vec.reshape(shape)


def radial_derivative(layout: PolarLayout, values: np.ndarray) -> np.ndarray:
    """``d/dr`` of samples shaped ``(n_radii, n_theta, ...)``."""
    arr = np.asarray(values)
    out = np.empty_like(arr, dtype=np.result_type(arr, float))
    base = differentiation_matrix(layout.order)
    for p in range(layout.n_panels):
        cut = layout.panel_slice(p)
        a, b = layout.edges[p], layout.edges[p + 1]
        out[cut] = np.tensordot(base * (2.0 / (b - a)), arr[cut], axes=(1, 0))
    return out


def angular_derivative(layout: PolarLayout, values: np.ndarray) -> np.ndarray:
    """``d/dtheta`` by FFT along axis 1 (Nyquist mode dropped)."""
    arr = np.asarray(values)
    n = layout.n_theta
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        freqs[n // 2] = 0.0
    spectrum = np.fft.fft(arr, axis=1)
    result = np.fft.ifft(1j * _along(freqs, 1, arr.ndim) * spectrum, axis=1)
    if not np.iscomplexobj(arr):
        return result.real
    return result


def polar_dbar(layout: PolarLayout, values: np.ndarray) -> np.ndarray:
    """``d/dzbar = (e^{i theta}/2)(d/dr + (i/r) d/dtheta)``."""
    arr = np.asarray(values)
    r = _along(layout.radii, 0, arr.ndim)
    phase = _along(np.exp(1j * layout.angles), 1, arr.ndim)
    return 0.5 * phase * (
        radial_derivative(layout, arr) + 1j * angular_derivative(layout, arr) / r
    )


def polar_d(layout: PolarLayout, values: np.ndarray) -> np.ndarray:
    """``d/dz = (e^{-i theta}/2)(d/dr - (i/r) d/dtheta)``."""
    arr = np.asarray(values)
    r = _along(layout.radii, 0, arr.ndim)
    phase = _along(np.exp(-1j * layout.angles), 1, arr.ndim)
    return 0.5 * phase * (
        radial_derivative(layout, arr) - 1j * angular_derivative(layout, arr) / r
    )


def angular_modes(layout: PolarLayout, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fourier coefficients in the angle.

    Returns:
        ``(m, coeffs)`` where ``m`` holds integer frequencies in FFT order and
        ``coeffs[i, j]`` is the coefficient of ``e^{i m_j theta}`` on ring ``i``.
    """
    n = layout.n_theta
    freqs = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    return freqs, np.fft.fft(np.asarray(values), axis=1) / n


def radial_interpolate(
    layout: PolarLayout, values: np.ndarray, radii: np.ndarray
) -> np.ndarray:
    """Evaluate ring data at arbitrary radii inside ``[inner, outer]``.

    ``values`` has shape ``(n_radii, ...)``; the result has shape ``(len(radii), ...)``.
    Each query is interpolated with the Legendre polynomial of its own panel.
    """
    arr = np.asarray(values)
    q = np.clip(np.asarray(radii, dtype=float).reshape(-1), layout.inner, layout.outer)
    panel = np.clip(np.searchsorted(layout.edges, q, side="right") - 1, 0, layout.n_panels - 1)
    out = np.zeros((len(q),) + arr.shape[1:], dtype=np.result_type(arr, float))
    for p in np.unique(panel):
        pick = panel == p
        a, b = layout.edges[p], layout.edges[p + 1]
        local = 2.0 * (q[pick] - a) / (b - a) - 1.0
        rows = interpolation_matrix(layout.order, local)
        out[pick] = np.tensordot(rows, arr[layout.panel_slice(int(p))], axes=(1, 0))
    return out


def _grid_axes(grid: QuadGrid, samples: np.ndarray, variable: int):
    if not grid.layouts:
        raise UnsupportedGeometryError(f"No spectral calculus on {grid.domain.kind} grids")
    arr = np.asarray(samples)
    if grid.domain.ambient_dim == 1:
        if variable != 0:
            raise UnsupportedGeometryError("Planar grids have a single complex variable")
        return grid.layouts[0], grid.layouts[0].reshape(arr), lambda out: out.reshape(-1)
    first, second = grid.layouts
    blocks = arr.reshape(first.n_radii, first.n_theta, second.n_radii, second.n_theta)
    if variable == 0:
        return first, blocks, lambda out: out.reshape(-1)
    swapped = blocks.transpose(2, 3, 0, 1)
    return second, swapped, lambda out: out.transpose(2, 3, 0, 1).reshape(-1)


def spectral_dbar(grid: QuadGrid, samples: np.ndarray, variable: int = 0) -> np.ndarray:
    """``d/dzbar_variable`` of node samples, flattened back to node order."""
    layout, arr, flatten = _grid_axes(grid, samples, variable)
    return flatten(polar_dbar(layout, arr))


def spectral_d(grid: QuadGrid, samples: np.ndarray, variable: int = 0) -> np.ndarray:
    """``d/dz_variable`` of node samples, flattened back to node order."""
    layout, arr, flatten = _grid_axes(grid, samples, variable)
    return flatten(polar_d(layout, arr))


def holomorphy_residual(grid: QuadGrid, samples: np.ndarray) -> float:
    """Largest ``|dbar f|`` over nodes and variables, relative to ``max(1, max|f|)``."""
    values = np.asarray(samples, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 1.0)
    worst = 0.0
    for variable in range(grid.domain.ambient_dim):
        worst = max(worst, float(np.max(np.abs(spectral_dbar(grid, values, variable)))))
    return worst / scale


__all__ = [
    "angular_derivative",
    "angular_modes",
    "differentiation_matrix",
    "holomorphy_residual",
    "interpolation_matrix",
    "polar_d",
    "polar_dbar",
    "radial_derivative",
    "radial_interpolate",
    "spectral_d",
    "spectral_dbar",
]
