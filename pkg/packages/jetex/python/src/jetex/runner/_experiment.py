"""Experiment configs: which suite to run, with which data and seed."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Literal

from jetex._errors import ConfigError
from jetex.bergman import parse_phi
from jetex.geom import parse_model

ReportFormat = Literal["json", "csv"]

SUITES = ("jets", "bergman", "dbar", "bump", "pipeline", "geom", "all")
# Suites drawing seeded random data; their configs must carry a seed.
RANDOMIZED_SUITES = frozenset({"bergman", "dbar", "bump", "pipeline", "geom", "all"})
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment description.

    Attributes:
        suite: One of :data:`SUITES`
        seed: RNG seed, mandatory for :data:`RANDOMIZED_SUITES`
        setup: Pipeline setup, ``"A"`` or ``"B"``
        jet: Taylor coefficients of the pipeline jet (setup A) or rows of
            z2-polynomials (setup B)
        phi: Weight name understood by :func:`jetex.bergman.parse_phi`
        resolution: Transversal grid resolution of the pipeline
        epsilons: Bump widths of the induction schedule
        delta: Excision radius (default: the lab ``excision_ratio``)
        model: Riemannian model name understood by :func:`jetex.geom.parse_model`
        radius: Radius of the tangent ball sampled by the geometry suite
        samples: Random samples per geometry batch
        out: Report path (``None`` for standard output)
        format: ``"json"`` or ``"csv"``

    Example:
        >>> config = ExperimentConfig.from_dict({"suite": "geom", "seed": 7})
        >>> config.model, config.format
        ('sphere:1', 'json')
    """

    suite: str
    seed: int | None = None
    setup: str = "A"
    jet: tuple[Any, ...] = (1.0, 0.5)
    phi: str = "zero"
    resolution: tuple[int, int] = (16, 32)
    epsilons: tuple[float, ...] = (1e-2,)
    delta: float | None = None
    model: str = "sphere:1"
    radius: float = 0.5
    samples: int = 200
    out: str | None = None
    format: str = "json"

    def __post_init__(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"Unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        if self.suite in RANDOMIZED_SUITES and self.seed is None:
            raise ConfigError(f"Suite {self.suite!r} draws random data and needs a seed")
        if self.setup not in ("A", "B"):
            raise ConfigError(f"setup must be 'A' or 'B', got {self.setup!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        if len(self.resolution) != 2 or min(self.resolution) < 1:
            raise ConfigError(f"resolution needs two positive entries, got {self.resolution}")
        if not self.epsilons or min(self.epsilons) <= 0:
            raise ConfigError("epsilons must be a nonempty list of positive widths")
        if self.delta is not None and self.delta <= 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.radius <= 0 or self.samples < 1:
            raise ConfigError("radius and samples must be positive")
        if not self.jet:
            raise ConfigError("jet needs at least one coefficient")
        try:
            parse_phi(self.phi)
            parse_model(self.model)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    @property
    def randomized(self) -> bool:
        return self.suite in RANDOMIZED_SUITES

    def with_suite(self, suite: str) -> ExperimentConfig:
        return replace(self, suite=suite)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["jet"] = [_encode_coefficient(v) for v in self.jet]
        data["resolution"] = list(self.resolution)
        data["epsilons"] = list(self.epsilons)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ExperimentConfig:
        """Validate a mapping against the config schema.

        Raises:
            ConfigError: For unknown keys, missing ``suite``, wrong types or
                invalid values
        """
        if not isinstance(data, Mapping):
            raise ConfigError(f"Experiment config must be an object, got {type(data).__name__}")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
        if "suite" not in data:
            raise ConfigError("Experiment config needs a 'suite'")
        try:
            kwargs: dict[str, Any] = {"suite": str(data["suite"])}
            if data.get("seed") is not None:
                if isinstance(data["seed"], bool) or not isinstance(data["seed"], int):
                    raise TypeError(f"seed must be an integer, got {data['seed']!r}")
                kwargs["seed"] = data["seed"]
            for name in ("setup", "phi", "model", "format"):
                if name in data:
                    kwargs[name] = str(data[name])
            if "jet" in data:
                kwargs["jet"] = tuple(_decode_coefficient(v) for v in _as_list(data["jet"]))
            if "resolution" in data:
                kwargs["resolution"] = tuple(int(v) for v in _as_list(data["resolution"]))
            if "epsilons" in data:
                kwargs["epsilons"] = tuple(float(v) for v in _as_list(data["epsilons"]))
            if data.get("delta") is not None:
                kwargs["delta"] = float(data["delta"])
            if "radius" in data:
                kwargs["radius"] = float(data["radius"])
            if "samples" in data:
                kwargs["samples"] = int(data["samples"])
            if data.get("out") is not None:
                kwargs["out"] = str(data["out"])
        except (KeyError, TypeError, ValueError) as e:
            msg = f"Malformed experiment config: {e}"
            raise ConfigError(msg) from e
        return cls(**kwargs)

    @classmethod
    def from_json(cls, json_path: str | Path) -> ExperimentConfig:
        """Load and validate a JSON experiment config.

        Raises:
            FileNotFoundError: If the file does not exist
            ConfigError: If the file is not valid JSON or fails validation
        """
        json_path = Path(json_path).expanduser()
        if not json_path.exists():
            raise FileNotFoundError(f"Experiment config not found: {json_path}")
        try:
            with open(json_path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            msg = f"Invalid JSON in {json_path}: {e}"
            raise ConfigError(msg) from e
        return cls.from_dict(data)


def _as_list(value: Any) -> Sequence[Any]:
    if isinstance(value, str | bytes) or not isinstance(value, Sequence):
        raise TypeError(f"expected a list, got {value!r}")
    return value


def _decode_coefficient(value: Any) -> complex | float | tuple[float, ...]:
    """Numbers, ``{"re", "im"}`` objects, or (setup B) lists of z2-coefficients."""
    if isinstance(value, bool):
        raise TypeError(f"jet coefficients must be numbers, got {value!r}")
    if isinstance(value, int | float):
        return float(value)
    if isinstance(value, Mapping):
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    return tuple(float(v) for v in _as_list(value))


def _encode_coefficient(value: Any) -> Any:
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, tuple):
        return list(value)
    return value


__all__ = ["FORMATS", "RANDOMIZED_SUITES", "SUITES", "ExperimentConfig", "ReportFormat"]
