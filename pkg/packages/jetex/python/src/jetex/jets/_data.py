"""Jet data, derivative jets and defining-section data."""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from jetex._errors import ContractError, PreconditionError
from jetex.model import MultiIndex, QuadGrid, as_multiindex, multiindices_upto

# Hypothesis |s| <= e^{-alpha} with alpha = 1
SECTION_BOUND = math.exp(-1.0)


def _as_samples(values: np.ndarray | Sequence[complex] | complex) -> np.ndarray:
    return np.atleast_1d(np.asarray(values, dtype=complex))


@dataclass(frozen=True, eq=False)
class JetData:
    """Transversal k-jet given by Taylor coefficients on the Y-grid.

    ``coeffs[alpha]`` holds the samples of ``a_alpha`` at every Y-node, so a
    lifting is ``sum_alpha a_alpha(y) * (z' - y')**alpha``.

    Attributes:
        r: Codimension of Y
        k: Jet order
        coeffs: Coefficient samples for every multi-index of order <= k

    Example:
        >>> jet = JetData.at_point([1.0, 2.0, 0.5])
        >>> jet.k, jet.coefficient(1)
        (2, array([2.+0.j]))
    """

    r: int
    k: int
    coeffs: Mapping[MultiIndex, np.ndarray]

    def __post_init__(self) -> None:
        if self.r < 1 or self.k < 0:
            raise ValueError(f"Need r >= 1 and k >= 0, got r={self.r}, k={self.k}")
        expected = multiindices_upto(self.r, self.k)
        normalized = {as_multiindex(a): _as_samples(v) for a, v in self.coeffs.items()}
        missing = [str(a) for a in expected if a not in normalized]
        extra = [str(a) for a in normalized if a not in set(expected)]
        if missing or extra:
            raise ContractError(f"Jet coefficients mismatch: missing {missing}, unexpected {extra}")
        lengths = {len(v) for v in normalized.values()}
        if len(lengths) != 1:
            raise ContractError(f"Coefficient samples have different lengths: {sorted(lengths)}")
        object.__setattr__(self, "coeffs", {a: normalized[a] for a in expected})

    @classmethod
    def at_point(cls, values: Sequence[complex], r: int = 1) -> JetData:
        """Jet at a single point from coefficients listed in multi-index order."""
        k = 0
        while len(multiindices_upto(r, k)) < len(values):
            k += 1
        indices = multiindices_upto(r, k)
        if len(indices) != len(values):
            raise ContractError(
                f"{len(values)} values do not fill all multi-indices of any order for r={r}"
            )
        return cls(r, k, {a: np.array([v]) for a, v in zip(indices, values, strict=True)})

    @classmethod
    def zeros(cls, r: int, k: int, n_points: int = 1) -> JetData:
        return cls(r, k, {a: np.zeros(n_points, dtype=complex) for a in multiindices_upto(r, k)})

    @property
    def indices(self) -> list[MultiIndex]:
        return list(self.coeffs)

    @property
    def n_points(self) -> int:
        return len(next(iter(self.coeffs.values())))

    def coefficient(self, alpha: MultiIndex | Sequence[int] | int) -> np.ndarray:
        return self.coeffs[as_multiindex(alpha)]

    def as_matrix(self) -> np.ndarray:
        """Coefficients with shape ``(n_indices, n_points)`` in multi-index order."""
        return np.stack([self.coeffs[a] for a in self.indices])

    def truncate(self, order: int) -> JetData:
        """Drop every coefficient of order above ``order``."""
        if not 0 <= order <= self.k:
            raise PreconditionError(f"Cannot truncate a {self.k}-jet to order {order}")
        return JetData(self.r, order, {a: v for a, v in self.coeffs.items() if a.order <= order})

    def extend(self, order: int) -> JetData:
        """Pad with zero coefficients up to ``order``."""
        if order < self.k:
            return self.truncate(order)
        zeros = np.zeros(self.n_points, dtype=complex)
        padded = {a: self.coeffs.get(a, zeros) for a in multiindices_upto(self.r, order)}
        return JetData(self.r, order, padded)

    def scaled(self, factor: complex) -> JetData:
        return JetData(self.r, self.k, {a: factor * v for a, v in self.coeffs.items()})

    def order_norm_squared(self, j: int) -> np.ndarray:
        """``sum_{|alpha| = j} |a_alpha|**2`` at every Y-node."""
        terms = [np.abs(v) ** 2 for a, v in self.coeffs.items() if a.order == j]
        return np.sum(terms, axis=0) if terms else np.zeros(self.n_points)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(v)) <= tol for v in self.coeffs.values())

    def to_nabla(self) -> NablaJet:
        return NablaJet(
            self.r, self.k, {a: a.factorial * v for a, v in self.coeffs.items()}
        )

    def to_dict(self) -> dict[str, Any]:
        """Serialize to ``{r, k, coeffs: [{alpha, values: [[re, im], ...]}]}``."""
        return {
            "r": self.r,
            "k": self.k,
            "coeffs": [
                {
                    "alpha": list(alpha.entries),
                    "values": [[float(v.real), float(v.imag)] for v in values],
                }
                for alpha, values in self.coeffs.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> JetData:
        """Rebuild a jet from :meth:`to_dict` output.

        Raises:
            ContractError: If a key is missing or a value pair is malformed
        """
        try:
            coeffs = {
                MultiIndex(tuple(int(a) for a in item["alpha"])): np.array(
                    [complex(re, im) for re, im in item["values"]]
                )
                for item in data["coeffs"]
            }
            r, k = int(data["r"]), int(data["k"])
        except (KeyError, TypeError, ValueError) as e:
            msg = f"Malformed jet data: {e}"
            raise ContractError(msg) from e
        return cls(r, k, coeffs)

    def to_json(self, output_path: str | Path) -> Path:
        output_path = Path(output_path).expanduser()
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
        return output_path

    @classmethod
    def from_json(cls, json_path: str | Path) -> JetData:
        """Load a jet written by :meth:`to_json`.

        Raises:
            FileNotFoundError: If the file does not exist
            ContractError: If the JSON cannot be parsed into a jet
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
class NablaJet:
    """Transversal derivatives ``nabla^alpha f = d^alpha f`` on the Y-grid.

    In the flat model the order-j symmetric tensor has entry ``nabla^alpha``
    at every index tuple whose counts give ``alpha``; :meth:`tensor` builds it.
    """

    r: int
    k: int
    values: Mapping[MultiIndex, np.ndarray]

    def __post_init__(self) -> None:
        normalized = {as_multiindex(a): _as_samples(v) for a, v in self.values.items()}
        expected = multiindices_upto(self.r, self.k)
        if set(normalized) != set(expected):
            raise ContractError("NablaJet needs every multi-index of order <= k")
        object.__setattr__(self, "values", {a: normalized[a] for a in expected})

    @property
    def n_points(self) -> int:
        return len(next(iter(self.values.values())))

    def order(self, j: int) -> dict[MultiIndex, np.ndarray]:
        return {a: v for a, v in self.values.items() if a.order == j}

    def tensor(self, j: int) -> np.ndarray:
        """Symmetric order-j tensor with shape ``(n_points,) + (r,) * j``."""
        out = np.zeros((self.n_points,) + (self.r,) * j, dtype=complex)
        for idx in np.ndindex(*((self.r,) * j)):
            counts = tuple(idx.count(i) for i in range(self.r))
            out[(slice(None), *idx)] = self.values[MultiIndex(counts)]
        return out

    def to_jet(self) -> JetData:
        return JetData(self.r, self.k, {a: v / a.factorial for a, v in self.values.items()})

    def max_difference(self, other: NablaJet) -> float:
        if (self.r, self.k) != (other.r, other.k):
            raise ContractError("Cannot compare jets of different shape")
        return max(
            float(np.max(np.abs(self.values[a] - other.values[a]))) for a in self.values
        )


@dataclass(frozen=True, eq=False)
class SectionData:
    """Samples of the defining section ``s`` and its derivatives.

    Attributes:
        s_values: ``s`` at ambient nodes, shape ``(N, r)``
        Ds: First derivative at ambient nodes, shape ``(N, r, n)``
        D2s_sup: Sup over the domain of the second-derivative norm
        Ds_y: First derivative at Y-nodes, shape ``(M, r, n)``
        lambda_r_ds: ``|Lambda^r(ds)|`` at Y-nodes, shape ``(M,)``
    """

    s_values: np.ndarray
    Ds: np.ndarray
    D2s_sup: float
    Ds_y: np.ndarray
    lambda_r_ds: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        s_values = np.asarray(self.s_values, dtype=complex)
        if s_values.ndim == 1:
            s_values = s_values[:, None]
        ds = np.asarray(self.Ds, dtype=complex)
        ds_y = np.asarray(self.Ds_y, dtype=complex)
        if ds.ndim != 3 or ds_y.ndim != 3:
            raise ContractError("Ds and Ds_y must have shape (nodes, r, n)")
        if ds.shape[0] != s_values.shape[0] or ds.shape[1] != s_values.shape[1]:
            raise ContractError(f"Ds shape {ds.shape} does not match s_values {s_values.shape}")
        modulus = np.linalg.norm(s_values, axis=1)
        if modulus.size and np.max(modulus) > SECTION_BOUND * (1 + 1e-12):
            raise PreconditionError(
                f"|s| <= 1/e violated: max |s| = {np.max(modulus):.6g} > {SECTION_BOUND:.6g}"
            )
        if self.D2s_sup < 0:
            raise PreconditionError(f"D2s_sup must be nonnegative, got {self.D2s_sup}")
        lam = np.asarray(self.lambda_r_ds, dtype=float)
        if lam.size == 0:
            lam = wedge_norm(ds_y)
        if lam.shape != (ds_y.shape[0],) or np.any(lam < 0):
            raise ContractError("lambda_r_ds must hold one nonnegative value per Y-node")
        object.__setattr__(self, "s_values", s_values)
        object.__setattr__(self, "Ds", ds)
        object.__setattr__(self, "Ds_y", ds_y)
        object.__setattr__(self, "lambda_r_ds", lam)

    @property
    def r(self) -> int:
        return self.s_values.shape[1]

    @property
    def n(self) -> int:
        return self.Ds.shape[2]

    @property
    def s_abs(self) -> np.ndarray:
        return np.linalg.norm(self.s_values, axis=1)


def wedge_norm(ds: np.ndarray) -> np.ndarray:
    """``|Lambda^r(ds)| = sqrt(det(Ds Ds^H))`` in the flat metric."""
    arr = np.asarray(ds, dtype=complex)
    gram = arr @ np.conj(np.swapaxes(arr, 1, 2))
    return np.sqrt(np.abs(np.linalg.det(gram)))


def linear_section(
    grid: QuadGrid,
    y_grid: QuadGrid,
    r: int = 1,
    scale: float | None = None,
) -> SectionData:
    """Section ``s = (z' - c') * scale`` defining ``Y = {z_1 = ... = z_r = c}``.

    The default scale is ``1 / (e * diam)``, the normalization of the flat model,
    which guarantees ``|s| <= 1/e``.
    """
    n = grid.domain.ambient_dim
    if not 1 <= r <= n:
        raise PreconditionError(f"Codimension r={r} impossible in dimension {n}")
    c = np.asarray(grid.domain.center[:r])
    factor = scale if scale is not None else 1.0 / (math.e * grid.domain.diameter)
    s_values = (grid.nodes[:, :r] - c) * factor
    block = np.zeros((r, n), dtype=complex)
    block[:, :r] = factor * np.eye(r)
    ds = np.broadcast_to(block, (len(grid), r, n)).copy()
    ds_y = np.broadcast_to(block, (len(y_grid), r, n)).copy()
    return SectionData(s_values, ds, 0.0, ds_y)


def jet_from_rows(r: int, k: int, rows: Iterable[Sequence[complex]]) -> JetData:
    """Jet whose coefficient samples are given row by row in multi-index order."""
    indices = multiindices_upto(r, k)
    data = [np.asarray(row, dtype=complex) for row in rows]
    if len(data) != len(indices):
        raise ContractError(f"Expected {len(indices)} rows for r={r}, k={k}, got {len(data)}")
    return JetData(r, k, dict(zip(indices, data, strict=True)))


__all__ = [
    "JetData",
    "NablaJet",
    "SECTION_BOUND",
    "SectionData",
    "jet_from_rows",
    "linear_section",
    "wedge_norm",
]
