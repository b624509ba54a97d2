"""Planar dbar problems, the scalar curvature factor and spectral residuals."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from jetex._errors import (
    ContractError,
    OperatorNotPositiveError,
    PreconditionError,
    UnsupportedGeometryError,
)
from jetex.bergman import WeightField
from jetex.model import (
    ModelDomain,
    PolarLayout,
    QuadGrid,
    make_grid,
    polar_d,
    polar_dbar,
    spectral_dbar,
)


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _unpair(items: Any) -> np.ndarray:
    return np.array([complex(re, im) for re, im in items])


@dataclass(frozen=True, eq=False)
class DbarProblem:
    """``du/dzbar = g`` on a planar model domain, measured in ``L^2(weight)``.

    Attributes:
        domain: Disc or annulus
        grid: Polar grid on ``domain`` (excised when the weight is singular)
        weight: Weight field on ``grid``
        g: Coefficient of ``dzbar`` at every node

    Raises:
        UnsupportedGeometryError: If the grid has no planar polar layout
        ContractError: If ``g`` or the weight do not live on ``grid``
        PreconditionError: If ``g`` is not finite or ``int |g|^2 weight`` diverges
    """

    domain: ModelDomain
    grid: QuadGrid
    weight: WeightField
    g: np.ndarray

    def __post_init__(self) -> None:
        if self.domain.ambient_dim != 1 or not self.grid.layouts:
            raise UnsupportedGeometryError(
                f"dbar problems are planar; got a {self.domain.kind} grid"
            )
        if self.weight.grid is not self.grid:
            raise ContractError("Weight field is sampled on a different grid")
        g = np.asarray(self.g, dtype=complex)
        if g.ndim == 0:
            g = np.full(len(self.grid), complex(g))
        if g.shape != (len(self.grid),):
            raise ContractError(f"g has {g.size} samples, grid has {len(self.grid)} nodes")
        if not np.all(np.isfinite(g)):
            raise PreconditionError("g must be finite on the grid")
        if not np.isfinite(self.weight.norm_squared(g)):
            raise PreconditionError("int |g|^2 * weight is not finite")
        object.__setattr__(self, "g", g)

    @classmethod
    def on_grid(
        cls,
        grid: QuadGrid,
        g: np.ndarray | complex,
        weight: WeightField | None = None,
    ) -> DbarProblem:
        """Problem on ``grid`` with the flat weight unless one is given."""
        return cls(
            grid.domain,
            grid,
            WeightField.from_function(grid) if weight is None else weight,
            np.asarray(g, dtype=complex),
        )

    @property
    def layout(self) -> PolarLayout:
        return self.grid.polar

    def with_g(self, g: np.ndarray | complex) -> DbarProblem:
        return DbarProblem(self.domain, self.grid, self.weight, np.asarray(g, dtype=complex))

    def to_dict(self) -> dict[str, Any]:
        """Serialize the domain, grid parameters, weight and data."""
        layout = self.layout
        return {
            "domain": {
                "kind": self.domain.kind,
                "radii": list(self.domain.radii),
                "center": _pairs(np.asarray(self.domain.center)),
            },
            "grid": {
                "resolution": list(self.grid.resolution),
                "excision_radius": self.grid.excision_radius,
                "breakpoints": list(layout.edges[1:-1]),
            },
            "weight": {
                "phi": [float(v) for v in self.weight.phi],
                "singular_exponent": self.weight.singular_exponent,
                "log_factor": self.weight.log_factor,
            },
            "g": _pairs(self.g),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DbarProblem:
        """Rebuild a problem from :meth:`to_dict` output.

        Raises:
            ContractError: If a key is missing or a value is malformed
        """
        try:
            spec = data["domain"]
            domain = ModelDomain(
                spec["kind"], tuple(float(r) for r in spec["radii"]), tuple(_unpair(spec["center"]))
            )
            params = data["grid"]
            resolution = [int(v) for v in params["resolution"]]
            excision = float(params["excision_radius"])
            breakpoints = [float(b) for b in params["breakpoints"]]
            phi = np.array([float(v) for v in data["weight"]["phi"]])
            exponent = float(data["weight"]["singular_exponent"])
            log_factor = bool(data["weight"]["log_factor"])
            g = _unpair(data["g"])
        except (KeyError, TypeError, ValueError) as e:
            msg = f"Malformed dbar problem: {e}"
            raise ContractError(msg) from e
        grid = make_grid(domain, resolution, excision_radius=excision, breakpoints=breakpoints)
        weight = WeightField(grid, phi, exponent, log_factor)
        return cls(domain, grid, weight, g)

    def to_json(self, output_path: str | Path) -> Path:
        output_path = Path(output_path).expanduser()
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f)
        return output_path

    @classmethod
    def from_json(cls, json_path: str | Path) -> DbarProblem:
        """Load a problem written by :meth:`to_json`.

        Raises:
            FileNotFoundError: If the file does not exist
            ContractError: If the JSON cannot be parsed
        """
        path = Path(json_path).expanduser()
        if not path.exists():
            raise FileNotFoundError(f"JSON file not found: {path}")
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            msg = f"Failed to parse JSON: {e}"
            raise ContractError(msg) from e
        return cls.from_dict(data)


@dataclass(frozen=True, eq=False)
class CurvatureOperatorData:
    """Pointwise factor ``b`` of the scalar curvature operator.

    For one variable and forms of type (0, 1) the operator reduces to
    multiplication by ``b = eta * phi_{z zbar}``, so ``<B^{-1} g, g> = |g|^2 / b``.

    Raises:
        OperatorNotPositiveError: If ``b <= 0`` at some node
    """

    b: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.b, dtype=float)
        if b.size and float(np.min(b)) <= 0:
            raise OperatorNotPositiveError(
                f"Curvature factor must be positive at every node; min b = {float(np.min(b)):.3g}"
            )
        object.__setattr__(self, "b", b)

    @classmethod
    def from_weight(cls, weight: WeightField, eta: float = 1.0) -> CurvatureOperatorData:
        """``b = eta * d^2 phi / dz dzbar`` by spectral differentiation.

        Raises:
            PreconditionError: If ``eta`` is not positive
        """
        if eta <= 0:
            raise PreconditionError(f"eta must be positive, got {eta}")
        layout = weight.grid.polar
        phi = layout.reshape(weight.phi)
        laplace_quarter = np.real(polar_d(layout, polar_dbar(layout, phi))).reshape(-1)
        return cls(eta * laplace_quarter)

    def inverse_pairing(self, g: np.ndarray) -> np.ndarray:
        """``<B^{-1} g, g> = |g|^2 / b``."""
        values = np.asarray(g)
        if values.shape != self.b.shape:
            raise ContractError(f"g has shape {values.shape}, curvature has {self.b.shape}")
        return np.abs(values) ** 2 / self.b


def dbar_residual(grid: QuadGrid, u: np.ndarray, g: np.ndarray | complex) -> float:
    """``max |du/dzbar - g|`` over the nodes, relative to ``max(1, max |g|)``."""
    values = np.asarray(u, dtype=complex)
    target = np.broadcast_to(np.asarray(g, dtype=complex), values.shape)
    scale = max(1.0, float(np.max(np.abs(target))) if target.size else 1.0)
    return float(np.max(np.abs(spectral_dbar(grid, values) - target))) / scale


__all__ = ["CurvatureOperatorData", "DbarProblem", "dbar_residual"]
