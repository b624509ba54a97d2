"""Exception hierarchy for jetex.

Every error derives from ``JetexError``, itself a ``ValueError``: all of them
signal inputs (data, geometry, schedules) that the requested computation
cannot accept.
"""

from __future__ import annotations


class JetexError(ValueError):
    """Base class for all jetex errors."""


class ContractError(JetexError):
    """Samples are not aligned with the grid they claim to live on."""


class EmptyGridError(JetexError):
    """Excision or domain parameters leave no quadrature nodes."""


class DegenerateSectionError(JetexError):
    """The normal derivative of the defining section is singular."""


class UnsupportedGeometryError(JetexError):
    """The operation is only implemented for flat model setups."""


class NonHolomorphicError(JetexError):
    """Samples fail the spectral holomorphy test."""


class IllConditionedBasisError(JetexError):
    """Gram matrix condition number exceeds the configured limit."""


class InfeasibleConstraintsError(JetexError):
    """Jet constraints cannot be met inside the polynomial basis."""


class OperatorNotPositiveError(JetexError):
    """The scalar curvature operator is not strictly positive."""


class NonIntegrableDataError(JetexError):
    """Data is not square-integrable against the requested singular weight."""


class PreconditionError(JetexError):
    """An operation precondition is violated by the supplied data."""


class ChartCoverageError(JetexError):
    """Partition-of-unity charts do not cover the submanifold."""


class JetResidualError(JetexError):
    """The constructed extension does not reproduce the prescribed jet."""


class ConfigError(JetexError):
    """Experiment configuration does not match the schema."""


__all__ = [
    "JetexError",
    "ContractError",
    "EmptyGridError",
    "DegenerateSectionError",
    "UnsupportedGeometryError",
    "NonHolomorphicError",
    "IllConditionedBasisError",
    "InfeasibleConstraintsError",
    "OperatorNotPositiveError",
    "NonIntegrableDataError",
    "PreconditionError",
    "ChartCoverageError",
    "JetResidualError",
    "ConfigError",
]
