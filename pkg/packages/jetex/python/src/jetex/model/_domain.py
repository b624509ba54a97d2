"""Bounded model domains in C and C^2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from jetex._errors import PreconditionError

DomainKind = Literal["disc", "annulus", "ball2", "polydisc"]

_AMBIENT_DIM: dict[str, int] = {"disc": 1, "annulus": 1, "ball2": 2, "polydisc": 2}
_RADII_COUNT: dict[str, int] = {"disc": 1, "annulus": 2, "ball2": 1, "polydisc": 2}


@dataclass(frozen=True)
class ModelDomain:
    """A bounded pseudoconvex model domain.

    Use the constructors :meth:`disc`, :meth:`annulus`, :meth:`ball2` and
    :meth:`polydisc` rather than building the dataclass by hand.

    Attributes:
        kind: Domain family
        radii: ``(R,)`` for disc and ball, ``(r_in, r_out)`` for the annulus,
            ``(R1, R2)`` for the polydisc
        center: Center point, one complex coordinate per ambient dimension

    Example:
        >>> dom = ModelDomain.disc(1.0)
        >>> round(dom.volume, 6), dom.diameter
        (3.141593, 2.0)
    """

    kind: DomainKind
    radii: tuple[float, ...]
    center: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.kind not in _AMBIENT_DIM:
            raise ValueError(f"Unknown domain kind: {self.kind!r}")
        if len(self.radii) != _RADII_COUNT[self.kind]:
            raise ValueError(
                f"{self.kind} expects {_RADII_COUNT[self.kind]} radii, got {len(self.radii)}"
            )
        if any(not (r > 0 and math.isfinite(r)) for r in self.radii):
            raise ValueError(f"Radii must be positive and finite, got {self.radii}")
        if self.kind == "annulus" and not self.radii[0] < self.radii[1]:
            raise ValueError(f"Annulus needs r_in < r_out, got {self.radii}")
        if len(self.center) != self.ambient_dim:
            raise ValueError(
                f"{self.kind} center needs {self.ambient_dim} coordinate(s), got {self.center}"
            )

    @classmethod
    def disc(cls, radius: float = 1.0, center: complex = 0j) -> ModelDomain:
        return cls("disc", (float(radius),), (complex(center),))

    @classmethod
    def annulus(cls, r_in: float, r_out: float, center: complex = 0j) -> ModelDomain:
        return cls("annulus", (float(r_in), float(r_out)), (complex(center),))

    @classmethod
    def ball2(cls, radius: float = 1.0, center: tuple[complex, complex] = (0j, 0j)) -> ModelDomain:
        return cls("ball2", (float(radius),), (complex(center[0]), complex(center[1])))

    @classmethod
    def polydisc(
        cls, r1: float = 1.0, r2: float = 1.0, center: tuple[complex, complex] = (0j, 0j)
    ) -> ModelDomain:
        return cls("polydisc", (float(r1), float(r2)), (complex(center[0]), complex(center[1])))

    @property
    def ambient_dim(self) -> int:
        return _AMBIENT_DIM[self.kind]

    @property
    def outer_radius(self) -> float:
        """Radius bounding the first coordinate (the transversal one for Y = {z1 = 0})."""
        return self.radii[-1] if self.kind == "annulus" else self.radii[0]

    @property
    def inner_radius(self) -> float:
        return self.radii[0] if self.kind == "annulus" else 0.0

    @property
    def volume(self) -> float:
        """Lebesgue volume (real dimension 2n)."""
        if self.kind == "disc":
            return math.pi * self.radii[0] ** 2
        if self.kind == "annulus":
            return math.pi * (self.radii[1] ** 2 - self.radii[0] ** 2)
        if self.kind == "ball2":
            return math.pi**2 * self.radii[0] ** 4 / 2
        return math.pi**2 * self.radii[0] ** 2 * self.radii[1] ** 2

    @property
    def diameter(self) -> float:
        """Exact Euclidean diameter."""
        if self.kind == "polydisc":
            return 2.0 * math.hypot(self.radii[0], self.radii[1])
        return 2.0 * self.outer_radius

    def excised_volume(self, excision_radius: float) -> float:
        """Volume left after removing points whose first coordinate is within
        ``excision_radius`` of the center."""
        d = float(excision_radius)
        if self.kind == "disc":
            return math.pi * (self.radii[0] ** 2 - d**2)
        if self.kind == "annulus":
            lo = max(d, self.radii[0])
            return math.pi * (self.radii[1] ** 2 - lo**2)
        if self.kind == "ball2":
            return math.pi**2 * (self.radii[0] ** 2 - d**2) ** 2 / 2
        return math.pi**2 * (self.radii[0] ** 2 - d**2) * self.radii[1] ** 2

    def contains(self, points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        """Boolean mask of points (shape ``(N, n)``) lying in the closed domain."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        if pts.shape[1] != self.ambient_dim:
            raise PreconditionError(
                f"Points have {pts.shape[1]} coordinates, domain has {self.ambient_dim}"
            )
        shifted = pts - np.asarray(self.center)
        if self.kind == "disc":
            return np.abs(shifted[:, 0]) <= self.radii[0] + tol
        if self.kind == "annulus":
            mod = np.abs(shifted[:, 0])
            return (mod >= self.radii[0] - tol) & (mod <= self.radii[1] + tol)
        if self.kind == "ball2":
            return np.linalg.norm(shifted, axis=1) <= self.radii[0] + tol
        return (np.abs(shifted[:, 0]) <= self.radii[0] + tol) & (
            np.abs(shifted[:, 1]) <= self.radii[1] + tol
        )


__all__ = ["DomainKind", "ModelDomain"]
