"""Minimal-norm solutions of ``du/dzbar = g`` in weighted L2."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from jetex._config import get_lab_config
from jetex._errors import NonIntegrableDataError, PreconditionError
from jetex.bergman import BasisSpec, bergman_projection, gram_matrix, orthogonality_residual
from jetex.jets import ring_coefficients

from ._cauchy import cauchy_transform
from ._problem import DbarProblem, dbar_residual


@dataclass(frozen=True, eq=False)
class DbarSolution:
    """Solution samples with their weighted norm and diagnostics.

    Attributes:
        u: Solution at the grid nodes
        norm_squared: ``int |u|^2 * weight``
        residual: Relative ``max |du/dzbar - g|``
        orthogonality: ``max |<u, z^beta>_w|`` over the projection basis
        coefficients: Coefficients of the removed holomorphic part
        vanishing: Taylor coefficients of ``u`` at the puncture (singular solves)
    """

    u: np.ndarray
    norm_squared: float
    residual: float
    orthogonality: float
    coefficients: np.ndarray
    vanishing: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=complex))

    @property
    def max_vanishing(self) -> float:
        return float(np.max(np.abs(self.vanishing))) if self.vanishing.size else 0.0

    def to_dict(self) -> dict[str, Any]:
        """Scalar summary for reports."""
        return {
            "norm_squared": self.norm_squared,
            "residual": self.residual,
            "orthogonality": self.orthogonality,
            "max_vanishing": self.max_vanishing,
        }


def _project_out(
    problem: DbarProblem, particular: np.ndarray, basis: BasisSpec
) -> DbarSolution:
    gram = gram_matrix(problem.domain, problem.grid, problem.weight, basis)
    coefficients, holomorphic = bergman_projection(gram, particular)
    u = particular - holomorphic
    return DbarSolution(
        u=u,
        norm_squared=problem.weight.norm_squared(u),
        residual=dbar_residual(problem.grid, u, problem.g),
        orthogonality=orthogonality_residual(gram, u),
        coefficients=coefficients,
    )


def minimal_dbar_solution(problem: DbarProblem, basis: BasisSpec | None = None) -> DbarSolution:
    """Solve ``du/dzbar = g`` with the least weighted norm over ``u0 + span(basis)``.

    ``u = u0 - P_w(u0)``: the Cauchy transform minus its weighted Bergman
    projection onto the basis span.

    Example:
        >>> from jetex.model import ModelDomain, make_grid
        >>> grid = make_grid(ModelDomain.disc(1.0), (16, 32))
        >>> solution = minimal_dbar_solution(DbarProblem.on_grid(grid, 1.0))
        >>> round(solution.norm_squared / np.pi, 10)
        0.5
    """
    basis = BasisSpec(12) if basis is None else basis
    return _project_out(problem, cauchy_transform(problem), basis)


def taylor_part(problem: DbarProblem, order: int) -> np.ndarray:
    """Coefficients ``t_0..t_{order-1}`` of the Cauchy transform at the center.

    Valid when ``g`` vanishes near the center; then
    ``t_j = -2 int g_{j+1}(p) p^{-j} dp`` with ``g_m`` the angular modes of ``g``.
    """
    layout = problem.layout
    n = layout.n_theta
    if order >= n // 2:
        raise PreconditionError(f"Order {order} aliases on {n} angular nodes")
    modes = np.fft.fft(layout.reshape(problem.g), axis=1) / n
    coefficients = np.empty(order, dtype=complex)
    for j in range(order):
        coefficients[j] = -2.0 * np.sum(
            layout.radial_weights * modes[:, j + 1] * layout.radii ** (-float(j))
        )
    return coefficients


def _quiet_ring(problem: DbarProblem, tol: float) -> int:
    """Outermost ring index below which ``g`` vanishes on every ring."""
    rings = np.max(np.abs(problem.layout.reshape(problem.g)), axis=1)
    scale = max(1.0, float(np.max(rings)))
    loud = np.nonzero(rings > tol * scale)[0]
    return (int(loud[0]) if loud.size else len(rings)) - 1


def singular_weight_solve(
    problem: DbarProblem,
    basis_degree: int = 16,
    vanishing_tol: float = 1e-6,
) -> DbarSolution:
    """Solve in ``L^2(|z|^{-2m} e^{-phi})`` with ``m`` the weight's singular exponent.

    The Taylor polynomial of degree ``< m`` of the Cauchy transform is removed
    first, so the particular solution vanishes to order ``m`` at the puncture;
    then ``span{z^j : m <= j <= basis_degree}`` is projected out. The Taylor
    coefficients of ``u`` through order ``m - 1`` are read on the outermost
    ring inside the zero set of ``g`` and stored in ``vanishing``.

    Raises:
        PreconditionError: If the weight has no integer singular exponent or the
            grid is not excised
        NonIntegrableDataError: If ``g`` does not vanish on the innermost ring
    """
    exponent = problem.weight.singular_exponent
    m = int(round(exponent))
    if m < 1 or not math.isclose(exponent, m):
        raise PreconditionError(f"Singular exponent must be a positive integer, got {exponent}")
    if problem.grid.excision_radius <= 0:
        raise PreconditionError("Singular solves need an excised grid")
    tol = get_lab_config().holomorphy_tol
    ring = _quiet_ring(problem, tol)
    if ring < 0:
        raise NonIntegrableDataError(
            f"g does not vanish near the puncture; int |g|^2 |z|^(-{2 * m}) diverges"
        )

    layout = problem.layout
    center = problem.domain.center[0]
    particular = cauchy_transform(problem)
    taylor = taylor_part(problem, m)
    particular = particular - np.polynomial.polynomial.polyval(problem.grid.z - center, taylor)
    solution = _project_out(problem, particular, BasisSpec(basis_degree, min_degree=m))

    vanishing = ring_coefficients(layout, layout.reshape(solution.u), m - 1, ring)
    result = replace(solution, vanishing=vanishing)
    if result.max_vanishing > vanishing_tol:
        warnings.warn(
            f"Solution does not vanish to order {m} at the puncture "
            f"(max Taylor coefficient {result.max_vanishing:.3g})",
            UserWarning,
            stacklevel=2,
        )
    return result


__all__ = [
    "DbarSolution",
    "minimal_dbar_solution",
    "singular_weight_solve",
    "taylor_part",
]
