"""Weight fields ``e^{-phi} |s|^{-2m} (-log|s|)^{-2}`` sampled on grids."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from jetex._errors import ContractError, PreconditionError
from jetex.model import QuadGrid

PhiFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class WeightField:
    """Samples of a plurisubharmonic weight and optional singular factors.

    The singular factors use ``|s|``, which defaults to the distance of the
    first coordinate from the domain center (the flat section up to scale).

    Attributes:
        grid: Grid the samples live on
        phi: Real samples of ``phi`` per node
        singular_exponent: ``m`` in the factor ``|s|^{-2m}``
        log_factor: Include ``(-log|s|)^{-2}``
        s_abs: ``|s|`` per node
    """

    grid: QuadGrid
    phi: np.ndarray
    singular_exponent: float = 0.0
    log_factor: bool = False
    s_abs: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim == 0:
            phi = np.full(len(self.grid), float(phi))
        if phi.shape != (len(self.grid),):
            raise ContractError(f"phi has {phi.size} samples, grid has {len(self.grid)} nodes")
        if not np.all(np.isfinite(np.exp(-phi))):
            raise PreconditionError("e^{-phi} is not finite on the grid")
        if self.singular_exponent < 0:
            raise PreconditionError(
                f"singular_exponent must be nonnegative, got {self.singular_exponent}"
            )
        s_abs = np.asarray(self.s_abs, dtype=float)
        if s_abs.size == 0:
            s_abs = np.abs(self.grid.nodes[:, 0] - self.grid.domain.center[0])
        if s_abs.shape != (len(self.grid),):
            raise ContractError("s_abs must hold one value per node")
        if self.is_singular and np.min(s_abs) <= 0:
            raise PreconditionError(
                "Singular weight factors need an excised grid (|s| = 0 at a node)"
            )
        if self.log_factor and np.max(s_abs) >= 1:
            raise PreconditionError("(-log|s|)^{-2} needs |s| < 1 on the grid")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "s_abs", s_abs)

    @classmethod
    def from_function(
        cls,
        grid: QuadGrid,
        phi: PhiFunction | float = 0.0,
        singular_exponent: float = 0.0,
        log_factor: bool = False,
        s_abs: np.ndarray | None = None,
    ) -> WeightField:
        """Sample ``phi`` (a callable on ``(N, n)`` nodes, or a constant)."""
        values = phi(grid.nodes) if callable(phi) else np.full(len(grid), float(phi))
        return cls(
            grid,
            np.real(np.asarray(values)),
            singular_exponent,
            log_factor,
            np.empty(0) if s_abs is None else s_abs,
        )

    @property
    def is_singular(self) -> bool:
        return self.singular_exponent > 0 or self.log_factor

    @property
    def density(self) -> np.ndarray:
        """Pointwise weight multiplying ``|f|^2`` under the integral."""
        values = np.exp(-self.phi)
        if self.singular_exponent > 0:
            values = values * self.s_abs ** (-2.0 * self.singular_exponent)
        if self.log_factor:
            values = values / np.log(self.s_abs) ** 2
        return values

    def with_singularity(
        self, singular_exponent: float, log_factor: bool = False
    ) -> WeightField:
        return WeightField(self.grid, self.phi, singular_exponent, log_factor, self.s_abs)

    def norm_squared(self, samples: np.ndarray) -> float:
        """``int |f|^2 * density``."""
        values = np.asarray(samples)
        if values.shape != (len(self.grid),):
            raise ContractError(f"Grid has {len(self.grid)} nodes, got {values.shape}")
        return float(np.dot(self.grid.weights * self.density, np.abs(values) ** 2))


def quadratic_phi(strength: float) -> PhiFunction:
    """Radial weight ``phi = A |z|^2`` (squared norm over all coordinates)."""

    def phi(nodes: np.ndarray) -> np.ndarray:
        return strength * np.sum(np.abs(nodes) ** 2, axis=1)

    return phi


def real_part_phi(scale: float = 1.0) -> PhiFunction:
    """Pluriharmonic weight ``phi = scale * Re z_1``."""

    def phi(nodes: np.ndarray) -> np.ndarray:
        return scale * nodes[:, 0].real

    return phi


def smoothed_real_part_phi(scale: float = 1.0) -> PhiFunction:
    """``phi = log(1 + e^{scale * Re z_1})``, plurisubharmonic and non-radial."""

    def phi(nodes: np.ndarray) -> np.ndarray:
        return np.logaddexp(0.0, scale * nodes[:, 0].real)

    return phi


def parse_phi(spec: str) -> PhiFunction:
    """Parse weight names used by configs and the command line.

    Accepted forms: ``zero``, ``radial:quadratic`` (optionally ``:A``),
    ``re`` and ``re:smoothed``.

    Raises:
        ValueError: For unknown names

    Example:
        >>> import numpy as np
        >>> phi = parse_phi("radial:quadratic:4")
        >>> float(phi(np.array([[0.5 + 0j]]))[0])
        1.0
    """
    parts = spec.strip().lower().split(":")
    if parts == ["zero"]:
        return quadratic_phi(0.0)
    if parts[:2] == ["radial", "quadratic"]:
        return quadratic_phi(float(parts[2]) if len(parts) > 2 else 1.0)
    if parts == ["re"]:
        return real_part_phi()
    if parts == ["re", "smoothed"]:
        return smoothed_real_part_phi()
    raise ValueError(
        f"Unknown weight {spec!r}: expected zero, radial:quadratic[:A], re or re:smoothed"
    )


__all__ = [
    "PhiFunction",
    "WeightField",
    "parse_phi",
    "quadratic_phi",
    "real_part_phi",
    "smoothed_real_part_phi",
]
