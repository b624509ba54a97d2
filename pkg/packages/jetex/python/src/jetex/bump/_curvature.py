"""Pointwise curvature inequalities of the bumped weight on planar grids.

All checks work with ``dz ^ dzbar`` coefficients computed by spectral
differentiation. For a holomorphic scalar section the term
``(r + k) i d d-bar log|s|^2`` vanishes off Y and is dropped; the planar
grids used here never carry a node on Y.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from jetex._errors import (
    ContractError,
    OperatorNotPositiveError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex.bergman import WeightField
from jetex.model import QuadGrid, spectral_d, spectral_dbar

from ._profile import BumpProfile, chi0, sigma_eta_lambda


def _section_modulus(grid: QuadGrid, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if grid.domain.ambient_dim != 1:
        raise UnsupportedGeometryError("Curvature checks run on planar grids (n = r = 1)")
    values = np.asarray(s, dtype=complex).reshape(-1)
    if values.shape != (len(grid),):
        raise ContractError(f"s has {values.size} samples, grid has {len(grid)} nodes")
    modulus = np.abs(values)
    if np.any(modulus == 0.0):
        raise PreconditionError("s vanishes at a grid node; excise Y from the grid")
    return values, modulus


def _laplace_coefficient(grid: QuadGrid, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(f_z, f_{z zbar})`` of a real function; the second is real."""
    first = spectral_d(grid, samples)
    return first, spectral_dbar(grid, first).real


def ddbar_sigma_check(
    grid: QuadGrid, s: np.ndarray, epsilon: float, tol: float = 1e-6
) -> dict[str, Any]:
    """Compare ``sigma_{z zbar}`` with ``(epsilon^2 / |s|^2) |sigma_z|^2``.

    With a trivial flat bundle the curvature term drops out and Lagrange's
    inequality becomes an equality for scalar sections, so the slack is
    roundoff.

    Returns:
        Dict with ``min_slack`` (``min(lhs - rhs)``), ``scale`` and ``holds``
        (``min_slack >= -tol * scale``)

    Raises:
        UnsupportedGeometryError: If the grid is not planar
        PreconditionError: If ``s`` vanishes at a node
    """
    _, modulus = _section_modulus(grid, s)
    sigma = np.log(modulus**2 + epsilon**2)
    sigma_z, sigma_zzbar = _laplace_coefficient(grid, sigma)
    rhs = epsilon**2 / modulus**2 * np.abs(sigma_z) ** 2
    slack = sigma_zzbar - rhs
    scale = max(1.0, float(np.max(np.abs(sigma_zzbar))), float(np.max(rhs)))
    min_slack = float(np.min(slack))
    return {
        "epsilon": epsilon,
        "min_slack": min_slack,
        "scale": scale,
        "holds": min_slack >= -tol * scale,
    }


def _bumped_terms(
    weight: WeightField, s: np.ndarray, profile: BumpProfile
) -> dict[str, np.ndarray]:
    grid = weight.grid
    _, modulus = _section_modulus(grid, s)
    bumped = sigma_eta_lambda(modulus, profile)
    sigma = np.asarray(bumped.sigma)
    eta = np.asarray(bumped.eta)
    chi = chi0(sigma)
    sigma_z, _ = _laplace_coefficient(grid, sigma)
    eta_z, eta_zzbar = _laplace_coefficient(grid, eta)
    _, phi_zzbar = _laplace_coefficient(grid, weight.phi)
    gradient = np.abs(eta_z) ** 2
    # eta (phi_zz + (r + k) (log|s|^2)_zz) - eta_zz - (chi''/chi'^2) |eta_z|^2
    damping = np.asarray(chi.second) / np.asarray(chi.first) ** 2
    operator = eta * phi_zzbar - eta_zzbar - damping * gradient
    return {
        "modulus": modulus,
        "sigma_z": sigma_z,
        "gradient": gradient,
        "operator": operator,
    }


def bumped_curvature_check(
    weight: WeightField,
    s: np.ndarray,
    profile: BumpProfile,
    tol: float = 1e-6,
) -> dict[str, Any]:
    """Pointwise check of the bumped curvature lower bound.

    Compares::

        eta phi_{z zbar} - eta_{z zbar} - (chi0''/chi0'^2) |eta_z|^2
            >= (epsilon^2 / (2 |s|^2)) |eta_z|^2

    at every node of the weight's grid. The factor ``|s|^{-2(r+k)}`` has a pluriharmonic
    logarithm off ``Y``, so the bound does not depend on the order.

    Returns:
        Dict with ``min_slack``, ``scale``, ``min_operator`` and ``holds``
    """
    terms = _bumped_terms(weight, s, profile)
    rhs = profile.epsilon**2 / (2.0 * terms["modulus"] ** 2) * terms["gradient"]
    slack = terms["operator"] - rhs
    scale = max(1.0, float(np.max(np.abs(terms["operator"]))))
    min_slack = float(np.min(slack))
    return {
        "epsilon": profile.epsilon,
        "min_slack": min_slack,
        "scale": scale,
        "min_operator": float(np.min(terms["operator"])),
        "holds": min_slack >= -tol * scale,
    }


def g1_bound_check(
    weight: WeightField,
    s: np.ndarray,
    h: np.ndarray,
    profile: BumpProfile,
    r: int = 1,
    k: int = 0,
) -> dict[str, Any]:
    """Measure ``int <B^{-1} g1, g1> |s|^{-2(r+k)}`` against its ``8 theta'^2`` bound.

    The bound is ``8 int theta'^2 |h|^2 |s|^{-2(r+k)}``.

    ``g1 = (1 + |s|^2/epsilon^2) theta'(|s|^2/epsilon^2) sigma_zbar h`` is the
    part of ``dbar`` of the truncated lifting produced by the cutoff; ``h`` is
    the difference ``f~ - F_{k-1}`` sampled on the grid. Both integrals carry
    ``e^{-phi}``.

    Raises:
        OperatorNotPositiveError: If the bumped operator is not positive on the
            support of ``theta'``
    """
    grid = weight.grid
    terms = _bumped_terms(weight, s, profile)
    values = np.asarray(h, dtype=complex).reshape(-1)
    if values.shape != (len(grid),):
        raise ContractError(f"h has {values.size} samples, grid has {len(grid)} nodes")
    modulus = terms["modulus"]
    t = modulus**2 / profile.epsilon**2
    theta_prime = profile.cutoff.derivative(t)
    support = theta_prime != 0
    operator = terms["operator"]
    if np.any(operator[support] <= 0):
        raise OperatorNotPositiveError(
            "Bumped curvature operator must be positive where theta' is nonzero"
        )

    density = grid.weights * np.exp(-weight.phi)
    singular = np.zeros(len(grid))
    singular[support] = modulus[support] ** (-2.0 * (r + k))
    g1_squared = ((1.0 + t) * theta_prime * np.abs(terms["sigma_z"]) * np.abs(values)) ** 2
    paired = np.zeros(len(grid))
    paired[support] = g1_squared[support] / operator[support]
    lhs = float(np.dot(density, paired * singular))
    rhs = 8.0 * float(np.dot(density, theta_prime**2 * np.abs(values) ** 2 * singular))
    return {
        "epsilon": profile.epsilon,
        "lhs": lhs,
        "rhs": rhs,
        "ratio": lhs / rhs if rhs > 0 else 0.0,
        "holds": lhs <= rhs * (1 + 1e-9),
    }


__all__ = ["bumped_curvature_check", "ddbar_sigma_check", "g1_bound_check"]
