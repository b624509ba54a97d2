"""Pointwise and L2 rho-weighted jet norms."""

from __future__ import annotations

import math
from typing import Protocol

import numpy as np

from jetex._errors import ContractError, DegenerateSectionError, PreconditionError
from jetex.model import QuadGrid, integrate

from ._data import JetData, NablaJet, SectionData


class HasPhi(Protocol):
    phi: np.ndarray


PhiLike = np.ndarray | float | HasPhi | None


def _as_jet(jet: JetData | NablaJet) -> JetData:
    return jet.to_jet() if isinstance(jet, NablaJet) else jet


def _phi_samples(phi: PhiLike, n_points: int) -> np.ndarray:
    if phi is None:
        return np.zeros(n_points)
    values = np.asarray(getattr(phi, "phi", phi), dtype=float)
    if values.ndim == 0:
        return np.full(n_points, float(values))
    if values.shape != (n_points,):
        raise ContractError(f"Weight has {values.size} samples, Y-grid has {n_points} nodes")
    return values


def _pointwise(jet: JetData, lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    if np.any(rho <= 0):
        raise PreconditionError(f"rho must be positive, got min {float(np.min(rho))}")
    if np.any(lam <= 0):
        raise DegenerateSectionError("|Lambda^r(ds)| vanishes on Y: jet norm undefined")
    r = jet.r
    total = np.abs(jet.coeffs[next(iter(jet.coeffs))]) ** 2
    for j in range(1, jet.k + 1):
        total = total + jet.order_norm_squared(j) / (lam ** (2 * j / r) * rho ** (2 * (r + j)))
    return total


def pointwise_jet_norm(
    jet: JetData | NablaJet, section: SectionData, rho: float, y: int = 0
) -> float:
    """``|f|^2 = |f|^2 + sum_j |nabla^j f|^2 / (|Lambda^r ds|^{2j/r} rho^{2(r+j)})`` at node ``y``.

    ``|nabla^j f|^2`` carries the ``1/(alpha!)^2`` factors of the flat model, so
    it equals the sum of ``|a_alpha|^2`` over ``|alpha| = j``.

    Raises:
        PreconditionError: If ``rho <= 0``
        DegenerateSectionError: If ``|Lambda^r(ds)|`` vanishes at ``y``

    Example:
        >>> import math
        >>> from jetex.jets import linear_section
        >>> from jetex.model import ModelDomain, make_grid, point_grid
        >>> section = linear_section(make_grid(ModelDomain.disc(), (8, 8)), point_grid(0j))
        >>> value = pointwise_jet_norm(JetData.at_point([1, 1]), section, 1.0)
        >>> round(value - (1 + 4 * math.e**2), 9)
        0.0
    """
    data = _as_jet(jet)
    if data.r != section.r:
        raise ContractError(f"Jet codimension {data.r} differs from section rank {section.r}")
    single = data if data.n_points == 1 else JetData(
        data.r, data.k, {a: v[y : y + 1] for a, v in data.coeffs.items()}
    )
    lam = section.lambda_r_ds[y : y + 1]
    return float(_pointwise(single, lam, np.array([float(rho)]))[0])


def pointwise_jet_field(
    jet: JetData | NablaJet, section: SectionData, rho: np.ndarray | float
) -> np.ndarray:
    """Pointwise jet norm at every Y-node."""
    data = _as_jet(jet)
    if data.n_points != len(section.lambda_r_ds):
        raise ContractError(
            f"Jet has {data.n_points} samples, section has {len(section.lambda_r_ds)} Y-nodes"
        )
    rho_arr = np.broadcast_to(np.asarray(rho, dtype=float), (data.n_points,))
    return _pointwise(data, section.lambda_r_ds, rho_arr)


def l2_jet_norm(
    jet: JetData | NablaJet,
    section: SectionData,
    rho_field: np.ndarray | float,
    weight: PhiLike,
    y_grid: QuadGrid,
) -> float:
    """``int_Y |f|^2_{s,rho,(k)} |Lambda^r ds|^{-2} e^{-phi} dV_Y`` by quadrature.

    Args:
        jet: Jet samples aligned with ``y_grid``
        section: Defining section (its Y-data must be aligned with ``y_grid``)
        rho_field: rho per Y-node (or a constant)
        weight: phi at the Y-nodes, a constant, an object with a ``phi`` array
            or None for the unweighted norm
        y_grid: Quadrature on Y (counting measure for a point)

    Raises:
        ContractError: If any sample count differs from ``len(y_grid)``
    """
    data = _as_jet(jet)
    if data.n_points != len(y_grid):
        raise ContractError(f"Jet has {data.n_points} samples, Y-grid has {len(y_grid)} nodes")
    pointwise = pointwise_jet_field(data, section, rho_field)
    phi = _phi_samples(weight, len(y_grid))
    integrand = pointwise * section.lambda_r_ds ** (-2.0) * np.exp(-phi)
    return float(integrate(y_grid, integrand))


def corollary_norm_ratio(
    jet: JetData | NablaJet, section: SectionData, phi0: float = 0.0
) -> dict[str, float]:
    """Point-Y norm against ``(sum |a_alpha|^2) e^{-phi(z0)}``.

    With ``s = (z - z0) / (e diam)`` the ratio lies between the smallest and
    largest of ``(e diam)^{2|alpha| + 2n}`` over the nonzero coefficients; the
    bracket is returned alongside.
    """
    data = _as_jet(jet)
    if data.n_points != 1:
        raise ContractError("Point jets carry exactly one sample per coefficient")
    lam = float(section.lambda_r_ds[0])
    n = section.n
    norm = float(
        _pointwise(data, section.lambda_r_ds[:1], np.ones(1))[0] * lam**-2 * math.exp(-phi0)
    )
    mass = float(sum(np.abs(v[0]) ** 2 for v in data.coeffs.values())) * math.exp(-phi0)
    scale = lam ** (-1.0 / data.r)
    factors = [
        scale ** (2 * a.order + 2 * n)
        for a, v in data.coeffs.items()
        if abs(v[0]) > 0
    ]
    if mass == 0:
        return {"norm": norm, "data": 0.0, "ratio": 0.0, "bracket_low": 0.0, "bracket_high": 0.0}
    return {
        "norm": norm,
        "data": mass,
        "ratio": norm / mass,
        "bracket_low": min(factors),
        "bracket_high": max(factors),
    }


__all__ = [
    "corollary_norm_ratio",
    "l2_jet_norm",
    "pointwise_jet_field",
    "pointwise_jet_norm",
]
