"""Sentinel value for options that were not given.

``None`` is a meaningful value for several jetex options (``breakpoints=None``
means "a single radial panel", ``charts=None`` means "a single chart"), so
omitted keyword arguments are marked with ``MISSING`` instead.
"""

from __future__ import annotations


class MissingType:
    """Sentinel type for omitted keyword arguments.

    MissingType is falsy, allowing for concise ``value or default`` patterns.

    Example:
        >>> from jetex import MISSING
        >>> def radius(r: float | MissingType = MISSING) -> float:
        ...     return r or 1.0
        >>> radius()
        1.0
        >>> radius(0.5)
        0.5
    """

    def __repr__(self) -> str:
        return "jetex.MISSING"

    def __bool__(self) -> bool:
        return False


MISSING = MissingType()


__all__ = ["MissingType", "MISSING"]
