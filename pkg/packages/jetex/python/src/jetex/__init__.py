"""Numerical verification lab for weighted L2 extension of transversal jets."""

from __future__ import annotations

__version__ = "0.1.0"

from ._config import LabConfig, get_lab_config, set_lab_options, threads_from_env
from ._errors import (
    ChartCoverageError,
    ConfigError,
    ContractError,
    DegenerateSectionError,
    EmptyGridError,
    IllConditionedBasisError,
    InfeasibleConstraintsError,
    JetexError,
    JetResidualError,
    NonHolomorphicError,
    NonIntegrableDataError,
    OperatorNotPositiveError,
    PreconditionError,
    UnsupportedGeometryError,
)
from ._sentinel import MISSING, MissingType

from . import model, jets, bergman, dbar, bump, pipeline, geom, runner  # noqa: E402, I001

__all__ = [
    "__version__",
    "MISSING",
    "MissingType",
    # Lab options
    "LabConfig",
    "get_lab_config",
    "set_lab_options",
    "threads_from_env",
    # Errors
    "JetexError",
    "ChartCoverageError",
    "ConfigError",
    "ContractError",
    "DegenerateSectionError",
    "EmptyGridError",
    "IllConditionedBasisError",
    "InfeasibleConstraintsError",
    "JetResidualError",
    "NonHolomorphicError",
    "NonIntegrableDataError",
    "OperatorNotPositiveError",
    "PreconditionError",
    "UnsupportedGeometryError",
    # Subpackages
    "model",  # Domains, grids, quadrature, spectral calculus
    "jets",  # Jets, rho weight, jet norms
    "bergman",  # Weighted Bergman spaces and minimal extensions
    "dbar",  # Minimal dbar solutions and Hormander checks
    "bump",  # Weight bumping, cutoff and scalar inequalities
    "pipeline",  # Inductive extension construction
    "geom",  # Jacobi fields and comparison geometry
    "runner",  # Experiment suites and reports
]
