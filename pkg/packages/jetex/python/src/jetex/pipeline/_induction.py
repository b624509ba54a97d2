"""The inductive construction ``F_j = G - u + F_{j-1}`` and its measurements.

For ``j = 0..k`` the lifting is truncated by the cutoff,
``G = theta(|s|^2 / eps^2) (f~ - F_{j-1})``, and the correction ``u`` solves
``du/dz1bar = dG/dz1bar`` with the least norm against
``|s|^{-2(1 + j)} e^{-phi}``. Because ``u`` vanishes to order ``1 + j`` on Y,
``F_j`` keeps the jet of ``f~`` through order ``j``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from jetex._config import get_lab_config
from jetex._errors import (
    JetResidualError,
    NonHolomorphicError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex._sentinel import MISSING, MissingType
from jetex.bergman import BasisSpec, WeightField, minimal_jet_extension
from jetex.bump import BumpProfile, c_rk_constant
from jetex.dbar import DbarProblem, singular_weight_solve
from jetex.jets import l2_jet_norm, rho_field, ring_coefficients
from jetex.model import QuadGrid, geometric_breakpoints, make_grid, polar_dbar

from ._extrapolate import extrapolate_norms, richardson
from ._lift import Chart, smooth_extension, truncate
from ._problem import DEFAULT_EPSILONS, ExtensionProblem

logger = logging.getLogger(__name__)

# Extra Taylor orders recorded beyond k in the coefficient vector.
EXTRA_ORDERS = 4


@dataclass(frozen=True)
class LevelRecord:
    """Measurements of one induction level ``F_j``.

    Attributes:
        order: ``j``
        norm_squared: ``int |F_j|^2 / (|s|^2 (-log|s|)^2) e^{-phi}``, excision tail included
        solve_norm: ``int |u|^2 |s|^{-2(1 + j)} e^{-phi}``, the norm the solver minimized
        chain_lhs: ``int |u|^2 / (|s|^{2(1 + j)} (-log(|s|^2 + eps^2))^2) e^{-phi}``
        chain_bound: ``16 C_{1,j} int_Y |a_j - (F_{j-1})_j|^2 |ds|^{-2(1 + j)} e^{-phi}``
        truncation_norm: ``int |G|^2 / ((|s|^2 + eps^2) (-log(|s|^2 + eps^2))^2) e^{-phi}``
        dbar_residual: Largest relative residual of the planar solves
        jet_residual: ``max |J^j F_j - f|`` relative to ``max(1, max |f|)``
        vanishing: Largest Taylor coefficient of ``u`` below order ``1 + j`` at Y,
            relative to ``max(1, max |f|)``
    """

    order: int
    norm_squared: float
    solve_norm: float
    chain_lhs: float
    chain_bound: float
    truncation_norm: float
    dbar_residual: float
    jet_residual: float
    vanishing: float = 0.0

    @property
    def chain_ratio(self) -> float:
        if self.chain_bound > 0:
            return self.chain_lhs / self.chain_bound
        return 0.0 if self.chain_lhs == 0 else math.inf

    def to_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "norm_squared": self.norm_squared,
            "solve_norm": self.solve_norm,
            "chain_lhs": self.chain_lhs,
            "chain_bound": self.chain_bound,
            "chain_ratio": self.chain_ratio,
            "truncation_norm": self.truncation_norm,
            "dbar_residual": self.dbar_residual,
            "jet_residual": self.jet_residual,
            "vanishing": self.vanishing,
        }


@dataclass(frozen=True, eq=False)
class InductionRun:
    """``F_k`` for one bump width.

    Attributes:
        epsilon: Bump width
        delta: Excision radius of the transversal grid
        grid: Transversal grid
        samples: ``F_k`` on transversal nodes times Y-nodes, shape ``(N, n_y)``
        coefficients: Taylor coefficients of ``F_k`` on Y through order
            ``k + EXTRA_ORDERS``, shape ``(orders, n_y)``
        levels: One record per ``j = 0..k``
        norm_squared: Weighted norm of ``F_k``
        holomorphy_residual: Relative ``max |dF_k / dz1bar|``
        cauchy_drift: Difference of the coefficients read on two rings
    """

    epsilon: float
    delta: float
    grid: QuadGrid
    samples: np.ndarray
    coefficients: np.ndarray
    levels: tuple[LevelRecord, ...]
    norm_squared: float
    holomorphy_residual: float
    cauchy_drift: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "norm_squared": self.norm_squared,
            "holomorphy_residual": self.holomorphy_residual,
            "cauchy_drift": self.cauchy_drift,
            "levels": [level.to_dict() for level in self.levels],
        }


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    """Extension of a jet over a schedule of bump widths.

    Attributes:
        problem: The extension problem
        runs: One run per width, largest width first
        data_norm: ``int_Y |f|^2_{s,rho,(k)} |Lambda^r ds|^{-2} e^{-phi}``
        norm_squared: Weighted norm of ``F_k`` extrapolated to ``eps -> 0``
        coefficients: Coefficient vector extrapolated to ``eps -> 0``
        extrapolation: Report of :func:`extrapolate_norms`
    """

    problem: ExtensionProblem
    runs: tuple[InductionRun, ...]
    data_norm: float
    norm_squared: float
    coefficients: np.ndarray
    extrapolation: dict[str, Any]

    @property
    def final(self) -> InductionRun:
        """The run with the smallest width."""
        return self.runs[-1]

    @property
    def constant(self) -> float:
        """Measured ``C_r^{(k)}``: weighted norm of ``F_k`` over the jet norm (NaN for 0/0)."""
        if self.data_norm > 0:
            return self.norm_squared / self.data_norm
        return math.nan

    @property
    def jet_residual(self) -> float:
        return max(level.jet_residual for run in self.runs for level in run.levels)

    @property
    def vanishing(self) -> float:
        """Largest relative Taylor coefficient of a correction ``u`` below its order at Y."""
        return max((level.vanishing for run in self.runs for level in run.levels), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        constant = self.constant
        return {
            "problem": {
                key: value for key, value in self.problem.to_dict().items() if key != "jet"
            },
            "k": self.problem.k,
            "data_norm": self.data_norm,
            "norm_squared": self.norm_squared,
            "constant": None if math.isnan(constant) else constant,
            "jet_residual": self.jet_residual,
            "vanishing": self.vanishing,
            "coefficients": [
                [[float(v.real), float(v.imag)] for v in row] for row in self.coefficients
            ],
            "extrapolation": self.extrapolation,
            "runs": [run.to_dict() for run in self.runs],
        }


def _resolve_delta(problem: ExtensionProblem, delta: float | MissingType) -> float:
    if isinstance(delta, MissingType):
        return problem.radius * get_lab_config().excision_ratio
    return float(delta)


def _weighted_total(
    grid: QuadGrid, density: np.ndarray, samples: np.ndarray, y_weights: np.ndarray
) -> float:
    """``sum_{i, y} w_i density_i w_y |samples_{i, y}|^2``."""
    mass = np.abs(samples) ** 2 @ y_weights
    return float(np.dot(grid.weights * density, mass))


def _excision_tail(
    problem: ExtensionProblem, delta: float, values_on_y: np.ndarray
) -> float:
    """Log-weighted mass of ``F`` inside ``|z1| < delta``, with ``F`` frozen at its value on Y."""
    c = problem.section_scale
    mass = float(np.dot(problem.y_grid.weights, np.abs(values_on_y) ** 2))
    return (
        2.0 * math.pi * c**2 * math.exp(-problem.phi_on_y()) * mass / abs(math.log(delta / c))
    )


def _log_density(s_abs: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return np.exp(-phi) / (s_abs**2 * np.log(s_abs) ** 2)


def _extraction_rings(grid: QuadGrid, radius: float) -> tuple[int, int]:
    radii = grid.polar.radii
    outer = int(np.argmin(np.abs(radii - 0.5 * radius)))
    inner = int(np.argmin(np.abs(radii - 0.25 * radius)))
    return outer, inner


def _cauchy_coefficients(
    grid: QuadGrid, samples: np.ndarray, order: int, rings: tuple[int, int]
) -> tuple[np.ndarray, float]:
    """Taylor coefficients on Y from the outer ring and their drift to the inner ring."""
    layout = grid.polar
    blocks = layout.reshape(samples)
    outer = ring_coefficients(layout, blocks, order, rings[0])
    inner = ring_coefficients(layout, blocks, order, rings[1])
    scale = max(1.0, float(np.max(np.abs(outer))))
    return outer, float(np.max(np.abs(outer - inner))) / scale


def jet_data_norm(problem: ExtensionProblem, grid: QuadGrid) -> float:
    """``int_Y |f|^2_{s,rho,(k)} |Lambda^r ds|^{-2} e^{-phi} dV_Y`` for the problem's jet."""
    section = problem.section(grid)
    return l2_jet_norm(
        problem.jet, section, rho_field(section), problem.phi_on_y(), problem.y_grid
    )


def truncation_norm(
    grid: QuadGrid,
    truncated: np.ndarray,
    s_abs: np.ndarray,
    phi: np.ndarray,
    profile: BumpProfile,
    y_weights: np.ndarray | None = None,
) -> dict[str, float]:
    """Weighted norm of the truncated lifting, which stays ``O(1 / log(eps)^2)``.

    Computes ``int |G|^2 / ((|s|^2 + eps^2) (-log(|s|^2 + eps^2))^2) e^{-phi}``
    and its product with ``log(eps)^2``.
    """
    samples = np.asarray(truncated)
    if samples.ndim == 1:
        samples = samples[:, None]
    weights = np.ones(samples.shape[1]) if y_weights is None else np.asarray(y_weights)
    bumped = s_abs**2 + profile.epsilon**2
    density = np.exp(-phi) / (bumped * np.log(bumped) ** 2)
    norm = _weighted_total(grid, density, samples, weights)
    return {
        "epsilon": profile.epsilon,
        "norm": norm,
        "scaled": norm * math.log(profile.epsilon) ** 2,
    }


def construct_extension(
    problem: ExtensionProblem,
    epsilon: float,
    delta: float | MissingType = MISSING,
    basis_degree: int = 12,
    jet_tol: float = 1e-6,
    dbar_tol: float = 1e-4,
    charts: Sequence[Chart] | None = None,
) -> InductionRun:
    """Run the induction ``j = 0..k`` for one bump width.

    Every level truncates the same lifting ``f~`` from :func:`smooth_extension`,
    so ``dG/dz1bar`` carries ``theta * dbar f~`` besides the cutoff term.

    Args:
        problem: Extension problem
        epsilon: Bump width, ``0 < epsilon < 1/e``
        delta: Excision radius (default: ``excision_ratio`` of the radius)
        basis_degree: Largest monomial degree projected out by each solve
        jet_tol: Largest accepted jet residual
        dbar_tol: Largest accepted relative dbar residual
        charts: Charts of the lifting (default: one chart, a holomorphic lifting)

    Raises:
        PreconditionError: If the bump shell does not fit between the excision
            and the boundary
        NonHolomorphicError: If a planar solve or ``F_k`` misses ``dbar`` by more
            than ``dbar_tol``
        JetResidualError: If ``J^j F_j`` differs from the jet by more than ``jet_tol``
        ChartCoverageError: From :func:`smooth_extension`
        NonIntegrableDataError: If ``dbar f~`` does not vanish near the excision,
            which happens for charts with corrections
    """
    profile = BumpProfile(epsilon)
    radius_delta = _resolve_delta(problem, delta)
    grid = problem.transversal_grid(epsilon, radius_delta)
    w = grid.z
    c = problem.section_scale
    s_abs = np.abs(w) / c
    phi = np.real(np.asarray(problem.phi_function(grid.nodes), dtype=complex))
    y_weights = problem.y_grid.weights
    y_monomials = problem.y_monomials()
    jet_matrix = problem.jet.as_matrix()
    jet_scale = max(1.0, float(np.max(np.abs(jet_matrix))))
    k = problem.k
    orders = min(k + EXTRA_ORDERS, grid.polar.n_theta // 2 - 1)
    if orders < k:
        raise PreconditionError(
            f"{grid.polar.n_theta} angular nodes cannot resolve a {k}-jet on the rings"
        )
    rings = _extraction_rings(grid, problem.radius)

    lift = smooth_extension(problem, grid, charts)
    lifts = lift.components
    # dG/dz1bar = theta' * z1 / (c eps)^2 * (f~ - F_prev) + theta * dbar f~ for holomorphic F_prev
    cutoff_dbar = profile.theta_prime(s_abs) * w / (c * epsilon) ** 2
    lift_dbar = profile.theta(s_abs)[:, None] * lift.dbar_components
    log_density = _log_density(s_abs, phi)
    bumped_log = np.log(s_abs**2 + epsilon**2) ** 2

    previous = np.zeros_like(lifts)
    previous_coefficients = np.zeros((orders + 1, len(y_weights)), dtype=complex)
    levels: list[LevelRecord] = []
    current_on_y = previous @ y_monomials
    coefficients = previous_coefficients
    for j in range(k + 1):
        truncated = truncate(lifts, previous, s_abs, profile)
        data = cutoff_dbar[:, None] * (lifts - previous) + lift_dbar
        weight = WeightField(grid, phi, float(1 + j), s_abs=s_abs)
        correction = np.zeros_like(lifts)
        solve_residual = 0.0
        vanishing = 0.0
        for beta in range(lifts.shape[1]):
            if not np.any(data[:, beta]):
                continue
            solution = singular_weight_solve(
                DbarProblem(grid.domain, grid, weight, data[:, beta]), basis_degree
            )
            correction[:, beta] = solution.u
            solve_residual = max(solve_residual, solution.residual)
            vanishing = max(vanishing, solution.max_vanishing / jet_scale)
        if solve_residual > dbar_tol:
            raise NonHolomorphicError(
                f"Level {j} solve misses dbar by {solve_residual:.3g} (tolerance {dbar_tol})"
            )
        current = truncated - correction + previous
        current_on_y = current @ y_monomials
        correction_on_y = correction @ y_monomials

        coefficients, _ = _cauchy_coefficients(grid, current_on_y, orders, rings)
        jet_residual = float(np.max(np.abs(coefficients[: j + 1] - jet_matrix[: j + 1])))
        jet_residual /= jet_scale
        if jet_residual > jet_tol:
            raise JetResidualError(
                f"J^{j} F_{j} misses the jet by {jet_residual:.3g} (tolerance {jet_tol})"
            )

        singular = np.exp(-phi) * s_abs ** (-2.0 * (1 + j))
        target = jet_matrix[j] - previous_coefficients[j]
        chain_bound = (
            16.0
            * c_rk_constant(1, j, profile)
            * c ** (2 * (1 + j))
            * math.exp(-problem.phi_on_y())
            * float(np.dot(y_weights, np.abs(target) ** 2))
        )
        norm = _weighted_total(grid, log_density, current_on_y, y_weights)
        levels.append(
            LevelRecord(
                order=j,
                norm_squared=norm + _excision_tail(problem, radius_delta, coefficients[0]),
                solve_norm=_weighted_total(grid, singular, correction_on_y, y_weights),
                chain_lhs=_weighted_total(
                    grid, singular / bumped_log, correction_on_y, y_weights
                ),
                chain_bound=chain_bound,
                truncation_norm=truncation_norm(
                    grid, truncated @ y_monomials, s_abs, phi, profile, y_weights
                )["norm"],
                dbar_residual=solve_residual,
                jet_residual=jet_residual,
                vanishing=vanishing,
            )
        )
        previous = current
        previous_coefficients = coefficients

    layout = grid.polar
    dbar = polar_dbar(layout, layout.reshape(current_on_y))
    holomorphy = float(np.max(np.abs(dbar))) / max(1.0, float(np.max(np.abs(current_on_y))))
    if holomorphy > dbar_tol:
        raise NonHolomorphicError(
            f"F_{k} misses holomorphy by {holomorphy:.3g} (tolerance {dbar_tol})"
        )
    _, drift = _cauchy_coefficients(grid, current_on_y, orders, rings)
    run = InductionRun(
        epsilon=epsilon,
        delta=radius_delta,
        grid=grid,
        samples=current_on_y,
        coefficients=coefficients,
        levels=tuple(levels),
        norm_squared=levels[-1].norm_squared,
        holomorphy_residual=holomorphy,
        cauchy_drift=drift,
    )
    logger.debug(
        "setup=%s k=%d eps=%g norm=%.6g jet_residual=%.2e",
        problem.setup,
        k,
        epsilon,
        run.norm_squared,
        max(level.jet_residual for level in levels),
    )
    return run


def run_induction(
    problem: ExtensionProblem,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    delta: float | MissingType = MISSING,
    basis_degree: int = 12,
    jet_tol: float = 1e-6,
    dbar_tol: float = 1e-4,
    charts: Sequence[Chart] | None = None,
) -> ExtensionResult:
    """Extend the problem's jet for every bump width and extrapolate to ``eps -> 0``.

    Runs :func:`construct_extension` from the largest width down, then
    extrapolates the weighted norm and the coefficient vector linearly in
    ``eps``. The measured constant divides the extrapolated norm by the
    weighted L2 norm of the jet.

    Raises:
        PreconditionError: If the schedule is empty
        NonHolomorphicError: From :func:`construct_extension`
        JetResidualError: From :func:`construct_extension`

    Example:
        >>> from jetex.jets import JetData
        >>> problem = ExtensionProblem("A", JetData.at_point([0.0, 1.0]), resolution=(12, 32))
        >>> result = run_induction(problem, epsilons=[1e-2])
        >>> abs(result.coefficients[1, 0] - 1.0) < 1e-3
        True
    """
    schedule = sorted({float(e) for e in epsilons}, reverse=True)
    if not schedule:
        raise PreconditionError("The bump-width schedule is empty")
    runs = tuple(
        construct_extension(problem, e, delta, basis_degree, jet_tol, dbar_tol, charts)
        for e in schedule
    )
    data_norm = jet_data_norm(problem, runs[0].grid)
    extrapolation = extrapolate_norms(schedule, [run.norm_squared for run in runs])
    limit, _ = richardson(schedule, np.stack([run.coefficients for run in runs]))
    result = ExtensionResult(
        problem=problem,
        runs=runs,
        data_norm=data_norm,
        norm_squared=extrapolation["limit"],
        coefficients=np.asarray(limit),
        extrapolation=extrapolation,
    )
    logger.info(
        "setup=%s k=%d widths=%s constant=%.6g",
        problem.setup,
        problem.k,
        schedule,
        result.constant,
    )
    return result


def direct_minimal_extension(
    problem: ExtensionProblem,
    delta: float | MissingType = MISSING,
    basis_degree: int = 12,
) -> dict[str, Any]:
    """Least log-weighted norm extension of a point jet (setup A), for comparison.

    Minimizes ``int |F|^2 / (|s|^2 (-log|s|)^2) e^{-phi}`` over polynomials of
    degree ``<= basis_degree`` with ``J^k F = f`` at the center; the excision
    tail is added as for the inductive construction.

    Raises:
        UnsupportedGeometryError: For setup B
    """
    if problem.setup != "A":
        raise UnsupportedGeometryError("The direct minimal extension compares point jets only")
    radius_delta = _resolve_delta(problem, delta)
    cuts = geometric_breakpoints(radius_delta, problem.radius, ratio=2.0)
    grid = make_grid(
        problem.domain, problem.resolution, excision_radius=radius_delta, breakpoints=cuts
    )
    s_abs = np.abs(grid.z) / problem.section_scale
    weight = WeightField.from_function(
        grid, problem.phi_function, 1.0, log_factor=True, s_abs=s_abs
    )
    fit = minimal_jet_extension(
        problem.domain, grid, weight, problem.jet, BasisSpec(basis_degree)
    )
    tail = _excision_tail(problem, radius_delta, np.array([fit.coefficient(0)]))
    return {
        "norm_squared": fit.norm_squared + tail,
        "coefficients": [fit.coefficient(m) for m in range(problem.k + 1)],
        "constraint_residual": fit.constraint_residual,
    }


__all__ = [
    "EXTRA_ORDERS",
    "ExtensionResult",
    "InductionRun",
    "LevelRecord",
    "construct_extension",
    "direct_minimal_extension",
    "jet_data_norm",
    "run_induction",
    "truncation_norm",
]
