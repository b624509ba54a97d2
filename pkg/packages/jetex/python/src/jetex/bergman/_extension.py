"""Least-weighted-norm holomorphic extension of point jets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import linalg

from jetex._errors import (
    ContractError,
    InfeasibleConstraintsError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex._sentinel import MISSING, MissingType
from jetex.jets import JetData
from jetex.model import ModelDomain, QuadGrid, geometric_breakpoints, make_grid, star_grid

from ._gram import BasisSpec, GramData, gram_matrix
from ._weight import PhiFunction, WeightField


@dataclass(frozen=True, eq=False)
class ExtensionFit:
    """Minimal-norm extension ``F = sum_beta c_beta (z - c)^beta``.

    Attributes:
        coefficients: Basis coefficients ``c_beta``
        norm_squared: ``int |F|^2 * weight``
        gram: Gram data the fit was solved with
        constraint_residual: ``max |J^k F - f|`` over the prescribed coefficients
    """

    coefficients: np.ndarray
    norm_squared: float
    gram: GramData
    constraint_residual: float

    @property
    def basis(self) -> BasisSpec:
        return self.gram.basis

    @property
    def samples(self) -> np.ndarray:
        """``F`` at the grid nodes."""
        return self.gram.design @ self.coefficients

    def coefficient(self, degree: int) -> complex:
        """Coefficient of ``(z - c)^degree`` in a one-variable basis."""
        for beta, value in zip(self.basis.indices, self.coefficients, strict=True):
            if beta.entries == (degree,):
                return complex(value)
        return 0j


def taylor_constraints(
    jet: JetData, basis: BasisSpec, offset: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Constraint matrix and target so that ``A c = a`` encodes ``J^k F = f``.

    ``A[alpha, beta]`` is the Taylor coefficient of ``(z - c)^beta`` at
    ``y = c + offset``: ``binom(beta, alpha) * offset^(beta - alpha)``.
    """
    rows = []
    for alpha in jet.indices:
        row = np.zeros(len(basis), dtype=complex)
        for col, beta in enumerate(basis.indices):
            if not alpha.below(beta):
                continue
            gaps = zip(offset, alpha.entries, beta.entries, strict=False)
            power = np.prod([shift ** (b - a) for shift, a, b in gaps])
            row[col] = alpha.binomial(beta) * power
        rows.append(row)
    target = np.array([jet.coeffs[alpha][0] for alpha in jet.indices], dtype=complex)
    return np.array(rows), target


def minimal_jet_extension(
    domain: ModelDomain,
    grid: QuadGrid,
    weight: WeightField,
    jet: JetData,
    basis: BasisSpec,
    y: np.ndarray | complex | MissingType = MISSING,
) -> ExtensionFit:
    """Minimize ``int |F|^2 * weight`` over the basis span subject to ``J^k F = f`` at ``y``.

    The constrained problem is solved in range-space form:
    ``c = G^{-1} A^H (A G^{-1} A^H)^{-1} a`` with a Cholesky factor of ``G``.

    Args:
        domain: Model domain
        grid: Quadrature grid on ``domain``
        weight: Weight field on ``grid``
        jet: Point jet (one sample per coefficient) with ``r`` equal to the
            basis dimension
        basis: Monomial basis
        y: Point carrying the jet (default: the domain center)

    Raises:
        ContractError: If the jet is not a point jet of matching dimension
        InfeasibleConstraintsError: If the basis cannot reproduce the jet
        IllConditionedBasisError: From the Gram assembly

    Example:
        >>> from jetex.model import make_grid
        >>> grid = make_grid(ModelDomain.disc(1.0), (32, 64))
        >>> fit = minimal_jet_extension(
        ...     grid.domain, grid, WeightField.from_function(grid),
        ...     JetData.at_point([1.0, 2.0]), BasisSpec(8),
        ... )
        >>> [round(abs(fit.coefficient(m)), 10) for m in range(3)]
        [1.0, 2.0, 0.0]
    """
    if jet.n_points != 1:
        raise ContractError("minimal_jet_extension needs a point jet (one sample per alpha)")
    if jet.r != basis.dim:
        raise ContractError(f"Jet codimension {jet.r} differs from basis dimension {basis.dim}")
    center = np.asarray(domain.center)[: basis.dim]
    point = center if isinstance(y, MissingType) else np.atleast_1d(np.asarray(y, dtype=complex))
    gram = gram_matrix(domain, grid, weight, basis)
    constraints, target = taylor_constraints(jet, basis, point - center)

    rank = np.linalg.matrix_rank(constraints) if constraints.size else 0
    if rank < len(target):
        raise InfeasibleConstraintsError(
            f"Basis of degrees {basis.min_degree}..{basis.max_degree} cannot match a "
            f"{jet.k}-jet: constraint rank {rank} < {len(target)}"
        )

    factor, _ = gram.factor()
    g_inv_ah = linalg.cho_solve(factor, np.conj(constraints).T)
    schur = constraints @ g_inv_ah
    multipliers = linalg.solve(schur, target, assume_a="her")
    coefficients = g_inv_ah @ multipliers

    residual = float(np.max(np.abs(constraints @ coefficients - target))) if len(target) else 0.0
    norm_squared = float(np.real(np.conj(coefficients) @ gram.matrix @ coefficients))
    return ExtensionFit(coefficients, norm_squared, gram, residual)


def verify_corollary_bound(
    domain: ModelDomain,
    z0: complex | tuple[complex, ...],
    jet: JetData,
    phi: PhiFunction | float = 0.0,
    epsilon: float = 0.5,
    resolution: tuple[int, ...] | MissingType = MISSING,
    basis_degree: int = 8,
) -> dict[str, Any]:
    """Measure the point-jet extension constant with the singular weight ``|z - z0|^{-2(n - eps)}``.

    The minimal extension in ``L^2(|z - z0|^{-2(n - eps)} e^{-phi})`` gives the
    left side; the data factor is
    ``(sum |a_alpha|^2) e^{-phi(z0)} / (eps^2 diam^{2(n - eps)})``.

    Returns:
        Dict with ``lhs``, ``rhs_frame`` (the data factor), ``ratio``
        (the measured constant), ``basis_degree``, ``grid_resolution`` and
        ``excision``

    Off-center points are supported on discs: the grid is then a
    :func:`~jetex.model.star_grid` around ``z0``, so the excision ball sits at
    ``z0`` as well.

    Raises:
        PreconditionError: If ``epsilon`` is outside ``(0, min(1, n)]`` or the
            excision ball around ``z0`` leaves the domain
        UnsupportedGeometryError: If ``z0`` is off-center on a domain other than a disc
    """
    n = domain.ambient_dim
    if not 0 < epsilon <= min(1.0, n):
        raise PreconditionError(f"epsilon must lie in (0, {min(1, n)}], got {epsilon}")
    point = np.atleast_1d(np.asarray(z0, dtype=complex))
    if point.shape != (n,):
        raise PreconditionError(f"z0 needs {n} coordinate(s), got {point.shape[0]}")
    centered = np.allclose(point, domain.center, atol=1e-14)
    if not centered and domain.kind != "disc":
        raise UnsupportedGeometryError(
            f"Off-center z0 is only supported on discs, got {domain.kind}"
        )

    if n == 1:
        delta, default_res = domain.outer_radius * 1e-8, (16, 32)
    else:
        delta, default_res = domain.outer_radius * 1e-4, (8, 16, 8, 16)
    res = default_res if isinstance(resolution, MissingType) else resolution
    cuts = geometric_breakpoints(delta, domain.outer_radius, ratio=8.0)
    if centered:
        grid = make_grid(domain, res, excision_radius=delta, breakpoints=cuts)
    else:
        grid = star_grid(domain, point[0], res, excision_radius=delta, breakpoints=cuts)
    distance = np.linalg.norm(grid.nodes - point, axis=1)
    phi_values = phi(grid.nodes) if callable(phi) else np.full(len(grid), float(phi))
    weight = WeightField(grid, np.real(phi_values), n - epsilon, s_abs=distance)
    phi0 = float(np.real(phi(point[None, :])[0])) if callable(phi) else float(phi)

    mass = float(np.sum(np.abs(jet.as_matrix()[:, 0]) ** 2))
    factor = mass * math.exp(-phi0) / (epsilon**2 * domain.diameter ** (2 * (n - epsilon)))
    if mass == 0:
        lhs = 0.0
    else:
        basis = BasisSpec(basis_degree, dim=n)
        fit = minimal_jet_extension(domain, grid, weight, jet, basis, y=point)
        lhs = fit.norm_squared
    return {
        "lhs": lhs,
        "rhs_frame": factor,
        "ratio": lhs / factor if factor > 0 else 0.0,
        "basis_degree": basis_degree,
        "grid_resolution": list(grid.resolution),
        "excision": delta,
    }


__all__ = [
    "ExtensionFit",
    "minimal_jet_extension",
    "taylor_constraints",
    "verify_corollary_bound",
]
