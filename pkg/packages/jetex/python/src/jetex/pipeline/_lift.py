"""Smooth liftings glued from charts, and their truncation near Y."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from jetex._errors import ChartCoverageError, ContractError
from jetex.bump import BumpProfile
from jetex.model import QuadGrid

from ._problem import ExtensionProblem

Transversal = Callable[[np.ndarray], np.ndarray]

_COVERAGE_TOL = 1e-10


@dataclass(frozen=True)
class Chart:
    """One chart of the lifting: a partition function and a holomorphic correction.

    All callables take the transversal coordinate ``w = z1 - c1`` (complex
    array) and return one value per entry. The chart's lifting is
    ``sum_alpha a_alpha w^alpha + s^{k+1} correction(w)``.

    Attributes:
        partition: ``theta_i(w)``
        partition_dbar: ``d theta_i / d wbar``
        correction: Holomorphic ``h_i``, or None for the plain Taylor lifting
    """

    partition: Transversal
    partition_dbar: Transversal
    correction: Transversal | None = None

    def correction_values(self, w: np.ndarray) -> np.ndarray:
        if self.correction is None:
            return np.zeros_like(w, dtype=complex)
        return np.asarray(self.correction(w), dtype=complex)


def single_chart() -> tuple[Chart]:
    """One chart covering everything: the lifting is holomorphic."""
    return (
        Chart(
            partition=lambda w: np.ones(np.shape(w)),
            partition_dbar=lambda w: np.zeros(np.shape(w), dtype=complex),
        ),
    )


def two_charts(
    width: float = 0.25,
    corrections: tuple[Transversal | None, Transversal | None] = (None, None),
) -> tuple[Chart, Chart]:
    """Charts split along ``Re w = 0`` by ``(1 +- tanh(Re w / width)) / 2``.

    ``d/dwbar`` of a function of ``Re w`` is half its ``x``-derivative, so
    ``sup |d theta_i / d wbar| = 1 / (4 width)``.

    Example:
        >>> left, right = two_charts(0.5)
        >>> w = np.array([-1.0 + 0j, 0j, 2.0 + 0j])
        >>> bool(np.allclose(left.partition(w) + right.partition(w), 1.0))
        True
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")

    def rise(w: np.ndarray) -> np.ndarray:
        return 0.5 * (1.0 + np.tanh(np.real(w) / width))

    def rise_dbar(w: np.ndarray) -> np.ndarray:
        return (1.0 / np.cosh(np.real(w) / width) ** 2 / (4.0 * width)).astype(complex)

    return (
        Chart(lambda w: 1.0 - rise(w), lambda w: -rise_dbar(w), corrections[0]),
        Chart(rise, rise_dbar, corrections[1]),
    )


@dataclass(frozen=True, eq=False)
class SmoothLift:
    """``f~ = sum theta_i f^_i`` and its ``dbar`` on a transversal grid.

    Attributes:
        components: ``f~`` per z2-monomial, shape ``(N, n_components)``
        dbar_components: ``d f~ / d z1bar`` per z2-monomial, same shape
        values: ``f~`` on transversal nodes times Y-nodes, shape ``(N, n_y)``
        dbar: ``d f~ / d z1bar`` with the shape of ``values``
        ratio: ``max |dbar f~| / |s|^{k+1}`` over the nodes
        bound: ``sum_i sup |d theta_i| * sup |h_i - h_1|``
    """

    components: np.ndarray
    dbar_components: np.ndarray
    values: np.ndarray
    dbar: np.ndarray
    ratio: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.ratio <= self.bound * (1 + 1e-9) + 1e-14


def taylor_components(problem: ExtensionProblem, grid: QuadGrid) -> np.ndarray:
    """``sum_j a_j^beta z1^j`` per z2-monomial ``beta``, shape ``(N, n_components)``."""
    return np.polynomial.polynomial.polyval(grid.z, problem.components).T


def taylor_lift(problem: ExtensionProblem, grid: QuadGrid) -> np.ndarray:
    """``sum_j a_j(y) z1^j`` on transversal nodes times Y-nodes, shape ``(N, n_y)``."""
    return taylor_components(problem, grid) @ problem.y_monomials()


def smooth_extension(
    problem: ExtensionProblem,
    grid: QuadGrid,
    charts: Sequence[Chart] | None = None,
) -> SmoothLift:
    """Glue chart liftings with a partition of unity.

    Each chart lifting agrees with the jet to order ``k``, so two liftings
    differ by ``s^{k+1} (h_i - h_j)`` and ``dbar f~`` is ``O(|s|^{k+1})``.
    A single chart gives ``dbar f~ = 0``.

    Raises:
        ChartCoverageError: If the partition functions do not sum to 1 on the grid
    """
    charts = single_chart() if charts is None else tuple(charts)
    w = grid.z
    if not charts:
        raise ChartCoverageError("No charts given")
    total = np.sum([np.real(chart.partition(w)) for chart in charts], axis=0)
    gap = float(np.max(np.abs(total - 1.0)))
    if gap > _COVERAGE_TOL:
        raise ChartCoverageError(
            f"Chart partition functions miss 1 by up to {gap:.3g}; the charts do not cover Y"
        )

    base = taylor_components(problem, grid).astype(complex)
    s = w / problem.section_scale
    power = s ** (problem.k + 1)
    components = np.zeros_like(base)
    dbar_components = np.zeros_like(base)
    for chart in charts:
        # The correction is constant along Y, so it joins the z2^0 component.
        lift = base.copy()
        lift[:, 0] += power * chart.correction_values(w)
        components += np.asarray(chart.partition(w))[:, None] * lift
        dbar_components += np.asarray(chart.partition_dbar(w))[:, None] * lift
    y_monomials = problem.y_monomials()
    values = components @ y_monomials
    dbar = dbar_components @ y_monomials

    modulus = np.abs(s)
    nonzero = modulus > 0
    ratio = (
        float(np.max(np.abs(dbar[nonzero]) / modulus[nonzero, None] ** (problem.k + 1)))
        if np.any(nonzero)
        else 0.0
    )
    reference = charts[0].correction_values(w)
    bound = sum(
        float(np.max(np.abs(chart.partition_dbar(w))))
        * float(np.max(np.abs(chart.correction_values(w) - reference)))
        for chart in charts
    )
    return SmoothLift(components, dbar_components, values, dbar, ratio, bound)


def truncate(
    lift: np.ndarray, previous: np.ndarray, s_abs: np.ndarray, profile: BumpProfile
) -> np.ndarray:
    """``G = theta(|s|^2 / eps^2) (f~ - F_prev)``, vanishing where ``|s| >= eps``.

    ``lift`` and ``previous`` have shape ``(N,)`` or ``(N, m)``; ``s_abs`` has shape ``(N,)``.

    Example:
        >>> profile = BumpProfile(0.1)
        >>> s_abs = np.array([0.05, 0.1, 0.2])
        >>> truncate(np.ones(3), np.zeros(3), s_abs, profile).tolist()
        [1.0, 0.0, 0.0]
    """
    lift_arr = np.asarray(lift)
    prev_arr = np.asarray(previous)
    if lift_arr.shape != prev_arr.shape or lift_arr.shape[0] != len(s_abs):
        raise ContractError(
            f"Cannot truncate: lifting {lift_arr.shape}, previous {prev_arr.shape}, "
            f"{len(s_abs)} nodes"
        )
    theta = profile.theta(s_abs)
    if lift_arr.ndim > 1:
        theta = theta.reshape((-1,) + (1,) * (lift_arr.ndim - 1))
    return theta * (lift_arr - prev_arr)


__all__ = [
    "Chart",
    "SmoothLift",
    "Transversal",
    "single_chart",
    "smooth_extension",
    "taylor_components",
    "taylor_lift",
    "truncate",
    "two_charts",
]
