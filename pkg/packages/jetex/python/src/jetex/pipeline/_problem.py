"""Extension problems on the two flat model setups.

Setup ``A`` is the unit disc with ``Y = {0}``; setup ``B`` is the bidisc with
``Y = {z1 = 0}``. In both cases the defining section is
``s = (z1 - c1) / (e * diam)`` and ``phi`` depends on ``z1`` only, so every
computation runs on a planar grid in the transversal variable. In setup B the
jet coefficients are polynomials in ``z2``; each monomial ``z2^beta`` is
carried as its own planar component and the components are recombined on the
Y-grid.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Literal

import numpy as np
from scipy import linalg

from jetex._errors import ContractError, PreconditionError
from jetex.bergman import PhiFunction, parse_phi
from jetex.jets import JetData, SectionData
from jetex.model import (
    ModelDomain,
    QuadGrid,
    geometric_breakpoints,
    make_grid,
    point_grid,
)

Setup = Literal["A", "B"]

DEFAULT_EPSILONS = (1e-1, 3e-2, 1e-2)
# Smallest gap (as a ratio) between the excision radius and the inner shell edge.
EXCISION_MARGIN = 4.0


@dataclass(frozen=True, eq=False)
class ExtensionProblem:
    """A transversal jet to extend, with the weight and grid parameters.

    Attributes:
        setup: ``"A"`` (``n = 1``, ``Y = {0}``) or ``"B"`` (``n = 2``, ``Y = {z1 = 0}``)
        jet: Taylor coefficients at the center (A) or on the Y-grid nodes (B)
        phi: Weight name understood by :func:`jetex.bergman.parse_phi`
        radius: Radius of the disc, or of both factors of the bidisc
        resolution: Radial nodes per panel and angular nodes of the transversal grid
        y_resolution: Resolution of the z2-disc carrying Y in setup B
        y_degree: Largest z2-degree fitted to the jet coefficients in setup B

    Raises:
        PreconditionError: For an unknown setup, a jet of codimension other
            than 1, or setup-B coefficients that are not polynomial in z2
        ContractError: If the jet is not sampled on the Y-grid

    Example:
        >>> problem = ExtensionProblem("A", JetData.at_point([1.0, 0.5]))
        >>> problem.k, round(problem.section_scale, 6)
        (1, 5.436564)
    """

    setup: Setup
    jet: JetData
    phi: str = "zero"
    radius: float = 1.0
    resolution: tuple[int, int] = (16, 32)
    y_resolution: tuple[int, int] = (8, 16)
    y_degree: int = 6
    _components: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.setup not in ("A", "B"):
            raise PreconditionError(f"Unknown setup {self.setup!r}: expected 'A' or 'B'")
        if self.jet.r != 1:
            raise PreconditionError(
                f"Both setups have codimension 1, got a jet with r={self.jet.r}"
            )
        if self.radius <= 0:
            raise PreconditionError(f"radius must be positive, got {self.radius}")
        parse_phi(self.phi)
        if self.jet.n_points != len(self.y_grid):
            raise ContractError(
                f"Jet has {self.jet.n_points} samples, Y-grid has {len(self.y_grid)} nodes"
            )
        object.__setattr__(self, "_components", self._fit_components())

    @property
    def k(self) -> int:
        return self.jet.k

    @cached_property
    def domain(self) -> ModelDomain:
        if self.setup == "A":
            return ModelDomain.disc(self.radius)
        return ModelDomain.polydisc(self.radius, self.radius)

    @property
    def section_scale(self) -> float:
        """``e * diam``; the section is ``s = z1 / (e * diam)``."""
        return math.e * self.domain.diameter

    @property
    def phi_function(self) -> PhiFunction:
        return parse_phi(self.phi)

    @cached_property
    def y_grid(self) -> QuadGrid:
        """Counting measure at the center (A) or the z2-disc grid (B)."""
        if self.setup == "A":
            return point_grid(0j)
        return make_grid(ModelDomain.disc(self.radius), self.y_resolution)

    @property
    def y_coordinate(self) -> np.ndarray:
        """The coordinate along Y at each Y-node (zero for setup A)."""
        if self.setup == "A":
            return np.zeros(1, dtype=complex)
        return self.y_grid.z

    def phi_on_y(self) -> float:
        """``phi`` on Y, where ``z1 = 0``."""
        return float(np.real(self.phi_function(np.zeros((1, 1), dtype=complex))[0]))

    def _fit_components(self) -> np.ndarray:
        """Coefficients ``C[j, beta]`` with ``a_j(z2) = sum_beta C[j, beta] z2^beta``."""
        matrix = self.jet.as_matrix()
        if self.setup == "A":
            return matrix.copy()
        degree = min(self.y_degree, self.y_resolution[1] // 2 - 1)
        vander = np.vander(self.y_coordinate, degree + 1, increasing=True)
        root = np.sqrt(self.y_grid.weights)[:, None]
        fit, *_ = linalg.lstsq(root * vander, root * matrix.T)
        scale = max(1.0, float(np.max(np.abs(matrix))))
        if np.max(np.abs(vander @ fit - matrix.T)) > 1e-8 * scale:
            raise PreconditionError(
                f"Setup B needs jet coefficients polynomial in z2 of degree <= {degree}"
            )
        fit[np.abs(fit) <= 1e-13 * scale] = 0.0
        used = np.nonzero(np.any(fit != 0, axis=1))[0]
        top = int(used[-1]) + 1 if used.size else 1
        return fit[:top].T.copy()

    @property
    def components(self) -> np.ndarray:
        """Transversal coefficients per z2-monomial, shape ``(k + 1, n_components)``."""
        return self._components

    def y_monomials(self) -> np.ndarray:
        """``z2^beta`` at the Y-nodes, shape ``(n_components, n_y)``."""
        n_components = self._components.shape[1]
        return np.vander(self.y_coordinate, n_components, increasing=True).T

    def transversal_grid(self, epsilon: float, delta: float) -> QuadGrid:
        """Excised disc grid in ``z1`` with panel edges on the cutoff shell.

        The shell ``eps/sqrt(2) <= |s| <= eps`` becomes one radial panel, and
        dyadic panels refine toward the excision radius ``delta``.

        Raises:
            PreconditionError: If the shell leaves the domain or comes within
                ``EXCISION_MARGIN`` of the excision
        """
        inner = self.section_scale * epsilon / math.sqrt(2.0)
        outer = self.section_scale * epsilon
        if outer >= self.radius:
            raise PreconditionError(
                f"epsilon={epsilon} puts the cutoff shell outside the domain"
            )
        if delta <= 0 or inner < EXCISION_MARGIN * delta:
            raise PreconditionError(
                f"epsilon={epsilon} collides with the excision delta={delta}; "
                "refine the excision or use a larger epsilon"
            )
        cuts = (*geometric_breakpoints(delta, self.radius, ratio=2.0), inner, outer)
        return make_grid(
            ModelDomain.disc(self.radius),
            self.resolution,
            excision_radius=delta,
            breakpoints=cuts,
        )

    def section(self, grid: QuadGrid) -> SectionData:
        """Section data of ``s = z1 / (e * diam)`` with ``n = 1`` (A) or ``n = 2`` (B)."""
        n = self.domain.ambient_dim
        factor = 1.0 / self.section_scale
        block = np.zeros((1, n), dtype=complex)
        block[0, 0] = factor
        return SectionData(
            grid.z[:, None] * factor,
            np.broadcast_to(block, (len(grid), 1, n)).copy(),
            0.0,
            np.broadcast_to(block, (len(self.y_grid), 1, n)).copy(),
        )

    def with_jet(self, jet: JetData) -> ExtensionProblem:
        return ExtensionProblem(
            self.setup, jet, self.phi, self.radius, self.resolution, self.y_resolution,
            self.y_degree,
        )

    def with_phi(self, phi: str) -> ExtensionProblem:
        return ExtensionProblem(
            self.setup, self.jet, phi, self.radius, self.resolution, self.y_resolution,
            self.y_degree,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "setup": self.setup,
            "phi": self.phi,
            "radius": self.radius,
            "resolution": list(self.resolution),
            "y_resolution": list(self.y_resolution),
            "y_degree": self.y_degree,
            "jet": self.jet.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ExtensionProblem:
        """Rebuild a problem from :meth:`to_dict` output.

        Raises:
            ContractError: If a key is missing or a value is malformed
        """
        try:
            setup = str(data["setup"]).upper()
            jet = JetData.from_dict(data["jet"])
            phi = str(data.get("phi", "zero"))
            radius = float(data.get("radius", 1.0))
            res = tuple(int(v) for v in data.get("resolution", (16, 32)))
            y_res = tuple(int(v) for v in data.get("y_resolution", (8, 16)))
            y_degree = int(data.get("y_degree", 6))
        except (KeyError, TypeError, ValueError) as e:
            msg = f"Malformed extension problem: {e}"
            raise ContractError(msg) from e
        if len(res) != 2 or len(y_res) != 2:
            raise ContractError("resolution and y_resolution need two entries each")
        return cls(setup, jet, phi, radius, res, y_res, y_degree)  # type: ignore[arg-type]

    def to_json(self, output_path: str | Path) -> Path:
        output_path = Path(output_path).expanduser()
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
        return output_path

    @classmethod
    def from_json(cls, json_path: str | Path) -> ExtensionProblem:
        """Load a problem written by :meth:`to_json`.

        Raises:
            FileNotFoundError: If the file does not exist
            ContractError: If the content is not a valid problem
        """
        json_path = Path(json_path).expanduser()
        if not json_path.exists():
            raise FileNotFoundError(f"Extension problem not found: {json_path}")
        try:
            with open(json_path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            msg = f"Invalid JSON in {json_path}: {e}"
            raise ContractError(msg) from e
        return cls.from_dict(data)


def polynomial_jet(
    setup: Setup, rows: np.ndarray, y_grid: QuadGrid | None = None
) -> JetData:
    """Jet whose order-``j`` coefficient is ``sum_beta rows[j, beta] z2^beta``.

    ``rows`` has shape ``(k + 1, n_beta)``. Setup A uses ``rows[:, 0]`` at the center.
    """
    arr = np.atleast_2d(np.asarray(rows, dtype=complex))
    if setup == "A":
        return JetData.at_point(list(arr[:, 0]))
    if y_grid is None:
        raise PreconditionError("Setup B jets need the Y-grid")
    monomials = np.vander(y_grid.z, arr.shape[1], increasing=True)
    values = monomials @ arr.T
    return JetData(1, arr.shape[0] - 1, {(j,): values[:, j] for j in range(arr.shape[0])})


__all__ = [
    "DEFAULT_EPSILONS",
    "EXCISION_MARGIN",
    "ExtensionProblem",
    "Setup",
    "polynomial_jet",
]
