"""Hormander-type estimate and removable-puncture checks."""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from jetex._errors import ContractError, PreconditionError
from jetex.bergman import BasisSpec
from jetex.model import QuadGrid, spectral_dbar

from ._problem import CurvatureOperatorData, DbarProblem, dbar_residual
from ._solve import minimal_dbar_solution

EXTENSION_SLOPE = 0.5


def hormander_estimate_check(
    problem: DbarProblem,
    eta: float = 1.0,
    lam: float = 1.0,
    curvature: CurvatureOperatorData | None = None,
    basis: BasisSpec | None = None,
) -> dict[str, Any]:
    """Compare both sides of the twisted estimate for the minimal solution.

    ``lhs = (eta + lam)^{-1} int |u|^2 e^{-phi}`` and
    ``rhs = 2 int <B^{-1} g, g> e^{-phi}`` with the scalar factor ``b`` of
    ``curvature`` (by default ``eta * phi_{z zbar}`` from the problem weight).

    Returns:
        Dict with ``lhs``, ``rhs``, ``ratio`` (0 when ``rhs`` is 0), ``holds``
        and the solver ``residual``

    Raises:
        PreconditionError: If ``eta`` or ``lam`` is not positive, or the weight
            is singular
        OperatorNotPositiveError: If the curvature factor is not positive
    """
    if eta <= 0 or lam <= 0:
        raise PreconditionError(f"eta and lambda must be positive, got {eta}, {lam}")
    if problem.weight.is_singular:
        raise PreconditionError("The estimate is checked for smooth weights e^{-phi}")
    if curvature is None:
        curvature = CurvatureOperatorData.from_weight(problem.weight, eta)
    if curvature.b.shape != problem.g.shape:
        raise ContractError("Curvature data lives on a different grid")

    solution = minimal_dbar_solution(problem, basis)
    density = problem.grid.weights * problem.weight.density
    lhs = float(np.dot(density, np.abs(solution.u) ** 2)) / (eta + lam)
    rhs = 2.0 * float(np.dot(density, curvature.inverse_pairing(problem.g)))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "ratio": lhs / rhs if rhs > 0 else 0.0,
        "holds": lhs <= rhs * (1 + 1e-12),
        "residual": solution.residual,
    }


def puncture_extension_check(
    grid: QuadGrid,
    u: np.ndarray,
    g: np.ndarray | complex | None = None,
    n_annuli: int = 6,
    tol: float = 1e-4,
) -> dict[str, Any]:
    """Decide whether ``u`` extends across the puncture from dyadic annuli.

    The L2 masses of ``u`` on ``{a_j < |z - c| < 2 a_j}``, ``a_j = delta 2^j``,
    are fitted against ``log a_j``. A slope above ``EXTENSION_SLOPE`` means
    the mass dies out at the puncture (``z^-1`` gives slope 0, ``zbar`` gives
    4). When ``g`` is given, ``u`` must also solve ``dbar u = g`` on every
    annulus to within ``tol`` relative to ``max(1, max |g|)``.

    Returns:
        Dict with ``radii``, ``masses``, ``slope``, ``extends`` and, with ``g``,
        ``residuals`` and ``residual`` (their max)

    Raises:
        PreconditionError: If the grid is not excised or fewer than two annuli fit
    """
    delta = grid.excision_radius
    if delta <= 0:
        raise PreconditionError("Puncture checks need an excised grid")
    values = np.asarray(u, dtype=complex)
    if values.shape != (len(grid),):
        raise ContractError(f"u has {values.size} samples, grid has {len(grid)} nodes")

    distance = np.abs(grid.z - grid.domain.center[0])
    outer = float(np.max(distance))
    radii = [delta * 2.0**j for j in range(n_annuli) if delta * 2.0 ** (j + 1) <= outer]
    if len(radii) < 2:
        raise PreconditionError("Too few dyadic annuli between the excision and the boundary")
    masses = []
    for a in radii:
        inside = (distance >= a) & (distance < 2 * a)
        masses.append(float(np.dot(grid.weights[inside], np.abs(values[inside]) ** 2)))

    # annuli below the roundoff floor of the total mass count as empty
    floor = 1e-20 * float(np.dot(grid.weights, np.abs(values) ** 2))
    if max(masses) <= floor:
        slope = math.inf
    else:
        logs = np.log(np.maximum(masses, floor))
        slope = float(np.polyfit(np.log(radii), logs, 1)[0])
    report: dict[str, Any] = {
        "radii": radii,
        "masses": masses,
        "slope": slope,
        "extends": slope > EXTENSION_SLOPE,
    }
    if g is not None:
        target = np.broadcast_to(np.asarray(g, dtype=complex), values.shape)
        pointwise = np.abs(spectral_dbar(grid, values) - target)
        residuals = [
            float(np.max(pointwise[(distance >= a) & (distance < 2 * a)], initial=0.0))
            for a in radii
        ]
        report["residuals"] = residuals
        report["residual"] = max(residuals)
        report["global_residual"] = dbar_residual(grid, values, g)
        scale = max(1.0, float(np.max(np.abs(target))))
        report["extends"] = report["extends"] and report["residual"] <= tol * scale
    return report


__all__ = ["EXTENSION_SLOPE", "hormander_estimate_check", "puncture_extension_check"]
