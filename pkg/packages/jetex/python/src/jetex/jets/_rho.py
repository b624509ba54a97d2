"""The rho weight of a defining section and the derived chart radius."""

from __future__ import annotations

import numpy as np
from scipy import linalg

from jetex._errors import DegenerateSectionError, PreconditionError

from ._data import SectionData

# Inversion constant 6 times the factor 4 lost in the metric comparison.
CHART_RADIUS_FACTOR = 24.0


def _check_node(section: SectionData, y: int) -> None:
    if not 0 <= y < len(section.Ds_y):
        raise PreconditionError(f"Y-node {y} out of range 0..{len(section.Ds_y) - 1}")


def normal_inverse_norm(section: SectionData, y: int) -> float:
    """Spectral norm of the inverse of ``Ds_y`` restricted to the normal directions.

    For an ``r x n`` matrix of rank ``r`` this is ``1 / sigma_min``.

    Raises:
        DegenerateSectionError: If ``Ds_y`` is not of full rank ``r``
    """
    _check_node(section, y)
    singular = linalg.svdvals(section.Ds_y[y])
    smallest = float(singular[-1]) if len(singular) else 0.0
    if smallest <= 1e-14 * max(1.0, float(singular[0])):
        raise DegenerateSectionError(
            f"Ds is singular on the normal directions at Y-node {y} "
            f"(singular values {np.array2string(singular, precision=3)})"
        )
    return 1.0 / smallest


def section_sup(section: SectionData) -> float:
    """``sup_xi (||D^2 s_xi|| + ||Ds_xi||)`` with the sup taken over grid nodes."""
    first = max(float(np.linalg.norm(m, ord=2)) for m in section.Ds) if len(section.Ds) else 0.0
    return section.D2s_sup + first


def rho_weight(section: SectionData, y: int) -> float:
    """``rho(y) = 1 / (||Ds_y^{-1}|| * sup_xi (||D^2 s_xi|| + ||Ds_xi||))``.

    Operator norms are spectral norms. ``D2s_sup`` already carries the sup of
    the second derivative, so the sup of the sum is bounded by the sum of sups;
    for sections with constant second derivative the two agree.

    Raises:
        DegenerateSectionError: If ``Ds_y`` is singular on the normal directions

    Example:
        >>> from jetex.jets import linear_section
        >>> from jetex.model import ModelDomain, make_grid, point_grid
        >>> grid = make_grid(ModelDomain.disc(1.0), (8, 8))
        >>> section = linear_section(grid, point_grid(0j))
        >>> round(rho_weight(section, 0), 12)
        1.0
    """
    return 1.0 / (normal_inverse_norm(section, y) * section_sup(section))


def rho_field(section: SectionData) -> np.ndarray:
    """``rho`` at every Y-node."""
    return np.array([rho_weight(section, y) for y in range(len(section.Ds_y))])


def r0_radius(section: SectionData, y: int) -> float:
    """Chart radius ``1 / (24 ||Ds_y^{-1}|| sup(||D^2 s|| + ||Ds||))``, i.e. ``rho / 24``."""
    return rho_weight(section, y) / CHART_RADIUS_FACTOR


def rho_refinement(coarse: SectionData, fine: SectionData, y: int = 0) -> dict[str, float]:
    """Compare ``rho`` from a grid sup with the value on a refined grid.

    Returns:
        Dict with ``coarse``, ``fine`` and ``relative_change``
    """
    rho_coarse = rho_weight(coarse, y)
    rho_fine = rho_weight(fine, y)
    return {
        "coarse": rho_coarse,
        "fine": rho_fine,
        "relative_change": abs(rho_fine - rho_coarse) / rho_fine,
    }


__all__ = [
    "CHART_RADIUS_FACTOR",
    "normal_inverse_norm",
    "r0_radius",
    "rho_field",
    "rho_refinement",
    "rho_weight",
    "section_sup",
]
