"""Monomial bases, weighted Gram matrices and Bergman projections."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

from jetex._config import get_lab_config
from jetex._errors import ContractError, IllConditionedBasisError, PreconditionError
from jetex.model import ModelDomain, MultiIndex, QuadGrid, multiindices_upto

from ._weight import WeightField


@dataclass(frozen=True)
class BasisSpec:
    """Holomorphic monomials ``(z - c)^beta`` with ``min_degree <= |beta| <= max_degree``.

    Attributes:
        max_degree: Largest total degree
        min_degree: Smallest total degree (``m`` for functions vanishing to order m)
        dim: Number of complex variables

    Example:
        >>> [str(b) for b in BasisSpec(2, min_degree=1).indices]
        ['(1,)', '(2,)']
    """

    max_degree: int
    min_degree: int = 0
    dim: int = 1

    def __post_init__(self) -> None:
        if self.min_degree < 0 or self.max_degree < self.min_degree:
            raise PreconditionError(
                f"Need 0 <= min_degree <= max_degree, got {self.min_degree}, {self.max_degree}"
            )
        if self.dim not in (1, 2):
            raise PreconditionError(f"Basis dimension must be 1 or 2, got {self.dim}")

    @cached_property
    def indices(self) -> list[MultiIndex]:
        return [
            beta
            for beta in multiindices_upto(self.dim, self.max_degree)
            if beta.order >= self.min_degree
        ]

    def __len__(self) -> int:
        return len(self.indices)

    def evaluate(self, points: np.ndarray, center: np.ndarray | complex = 0j) -> np.ndarray:
        """Monomial values with shape ``(N, len(basis))``."""
        shifted = np.atleast_2d(np.asarray(points, dtype=complex)) - np.asarray(center)
        if shifted.shape[1] < self.dim:
            raise ContractError(
                f"Points have {shifted.shape[1]} coordinates, basis needs {self.dim}"
            )
        return np.stack([beta.monomial(shifted) for beta in self.indices], axis=1)

    def polynomial(
        self, coefficients: np.ndarray, points: np.ndarray, center: np.ndarray | complex = 0j
    ) -> np.ndarray:
        """``sum_beta c_beta (z - c)^beta`` at ``points``."""
        return self.evaluate(points, center) @ np.asarray(coefficients, dtype=complex)


@dataclass(frozen=True, eq=False)
class GramData:
    """Hermitian matrix of weighted inner products ``<z^alpha, z^beta>_w``.

    Attributes:
        matrix: Hermitian Gram matrix
        condition: 2-norm condition number estimate
        basis: Basis the entries refer to
        design: Monomial values at the grid nodes
        weights: Quadrature weights times the weight density
    """

    matrix: np.ndarray
    condition: float
    basis: BasisSpec
    design: np.ndarray
    weights: np.ndarray

    def inner_products(self, samples: np.ndarray) -> np.ndarray:
        """``<f, z^beta>_w`` for every basis monomial."""
        values = np.asarray(samples)
        if values.shape[0] != len(self.weights):
            raise ContractError(f"Expected {len(self.weights)} samples, got {values.shape[0]}")
        return np.conj(self.design).T @ (self.weights * values)

    def factor(self) -> tuple[tuple[np.ndarray, bool], float]:
        """Cholesky factor, retried once with ``jitter_scale * trace`` on the diagonal.

        Returns:
            ``(cho_factor output, jitter applied)``
        """
        try:
            return linalg.cho_factor(self.matrix), 0.0
        except linalg.LinAlgError:
            jitter = get_lab_config().jitter_scale * float(np.trace(self.matrix).real)
            warnings.warn(
                f"Gram matrix not numerically positive definite; adding jitter {jitter:.3g}",
                UserWarning,
                stacklevel=2,
            )
            shifted = self.matrix + jitter * np.eye(len(self.matrix))
            return linalg.cho_factor(shifted), jitter

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        factor, _ = self.factor()
        return linalg.cho_solve(factor, rhs)


def gram_matrix(
    domain: ModelDomain,
    grid: QuadGrid,
    weight: WeightField,
    basis: BasisSpec,
) -> GramData:
    """Assemble the weighted Gram matrix of ``basis`` by quadrature.

    Args:
        domain: Model domain (monomials are centered at its center)
        grid: Quadrature grid on ``domain``
        weight: Weight field sampled on ``grid``
        basis: Monomial basis

    Returns:
        GramData with symmetry enforced by averaging with the adjoint

    Raises:
        ContractError: If the weight lives on another grid
        IllConditionedBasisError: If the condition number exceeds the lab limit

    Example:
        >>> from jetex.model import make_grid
        >>> grid = make_grid(ModelDomain.disc(1.0), (32, 64))
        >>> gram = gram_matrix(grid.domain, grid, WeightField.from_function(grid), BasisSpec(2))
        >>> np.round(gram.matrix.diagonal().real / np.pi, 10)
        array([1.        , 0.5       , 0.33333333])
    """
    if weight.grid is not grid:
        raise ContractError("Weight field is sampled on a different grid")
    if grid.domain is not domain and grid.domain != domain:
        raise ContractError("Grid was built on a different domain")
    design = basis.evaluate(grid.nodes, np.asarray(domain.center)[: basis.dim])
    weights = grid.weights * weight.density
    matrix = np.conj(design).T @ (weights[:, None] * design)
    matrix = 0.5 * (matrix + np.conj(matrix).T)
    condition = float(np.linalg.cond(matrix))
    limit = get_lab_config().condition_limit
    if not np.isfinite(condition) or condition > limit:
        raise IllConditionedBasisError(
            f"Gram condition number {condition:.3g} exceeds {limit:.3g} "
            f"(degree {basis.max_degree}); lower the degree or rescale the domain"
        )
    return GramData(matrix, condition, basis, design, weights)


def bergman_projection(gram: GramData, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weighted orthogonal projection onto the span of the basis.

    Returns:
        ``(coefficients, projected samples)``
    """
    coefficients = gram.solve(gram.inner_products(samples))
    return coefficients, gram.design @ coefficients


def orthogonality_residual(gram: GramData, samples: np.ndarray) -> float:
    """``max_beta |<u, z^beta>_w| / sqrt(<z^beta, z^beta>_w)``."""
    inner = gram.inner_products(samples)
    scale = np.sqrt(gram.matrix.diagonal().real)
    return float(np.max(np.abs(inner) / scale)) if len(inner) else 0.0


__all__ = [
    "BasisSpec",
    "GramData",
    "bergman_projection",
    "gram_matrix",
    "orthogonality_residual",
]
