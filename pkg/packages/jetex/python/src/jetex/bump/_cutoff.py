"""Cutoff profiles ``theta`` used to localize liftings near Y."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import numpy as np

from jetex._errors import PreconditionError

Profile = Callable[[np.ndarray], np.ndarray]


def smoothstep(x: np.ndarray | float) -> np.ndarray:
    """Quintic smoothstep ``S(x) = 6x^5 - 15x^4 + 10x^3``, clamped to ``[0, 1]``."""
    t = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


@dataclass(frozen=True)
class Cutoff:
    """A cutoff ``theta`` with its first two derivatives.

    ``theta'`` may only be nonzero on ``[lo, hi]``.

    Attributes:
        name: Label recorded in reports
        value: ``theta(t)``
        derivative: ``theta'(t)``
        second: ``theta''(t)``
        lo: Start of the transition
        hi: End of the transition
    """

    name: str
    value: Profile
    derivative: Profile
    second: Profile
    lo: float = 0.5
    hi: float = 1.0

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise PreconditionError(f"Transition [{self.lo}, {self.hi}] is empty")

    def validate(self, samples: int = 257) -> None:
        """Check ``theta = 1`` before the transition, ``0`` after and monotone between.

        Raises:
            PreconditionError: If a sampled value breaks one of these
        """
        t = np.linspace(self.lo, self.hi, samples)
        before = np.linspace(self.lo - 1.0, self.lo, 9)
        after = np.linspace(self.hi, self.hi + 1.0, 9)
        if not np.allclose(self.value(before), 1.0, atol=1e-12):
            raise PreconditionError(f"Cutoff {self.name!r} is not 1 on (-inf, {self.lo}]")
        if not np.allclose(self.value(after), 0.0, atol=1e-12):
            raise PreconditionError(f"Cutoff {self.name!r} is not 0 on [{self.hi}, inf)")
        if np.any(np.diff(self.value(t)) > 1e-14):
            raise PreconditionError(f"Cutoff {self.name!r} is not monotone on its transition")

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "lo": self.lo, "hi": self.hi}


def quintic_cutoff(lo: float = 0.5, hi: float = 1.0) -> Cutoff:
    """``theta(t) = 1 - S((t - lo) / (hi - lo))``: C2 with ``theta' = theta'' = 0`` at both ends.

    Example:
        >>> theta = quintic_cutoff()
        >>> float(theta.value(np.array(0.75)))
        0.5
        >>> float(theta.derivative(np.array(0.75)))
        -3.75
    """
    width = hi - lo

    def value(t: np.ndarray) -> np.ndarray:
        return 1.0 - smoothstep((np.asarray(t, dtype=float) - lo) / width)

    def derivative(t: np.ndarray) -> np.ndarray:
        x = np.clip((np.asarray(t, dtype=float) - lo) / width, 0.0, 1.0)
        return -30.0 * x**2 * (1.0 - x) ** 2 / width

    def second(t: np.ndarray) -> np.ndarray:
        x = np.clip((np.asarray(t, dtype=float) - lo) / width, 0.0, 1.0)
        return -60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / width**2

    return Cutoff("quintic", value, derivative, second, lo, hi)


def linear_cutoff(lo: float = 0.5, hi: float = 1.0) -> Cutoff:
    """Piecewise linear ramp; only Lipschitz, so ``theta'`` jumps at both ends."""
    width = hi - lo

    def value(t: np.ndarray) -> np.ndarray:
        return 1.0 - np.clip((np.asarray(t, dtype=float) - lo) / width, 0.0, 1.0)

    def derivative(t: np.ndarray) -> np.ndarray:
        arr = np.asarray(t, dtype=float)
        return np.where((arr > lo) & (arr < hi), -1.0 / width, 0.0)

    def second(t: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(t, dtype=float))

    return Cutoff("linear", value, derivative, second, lo, hi)


def theta_profile_report(cutoff: Cutoff | None = None, samples: int = 4097) -> dict[str, Any]:
    """``sup |theta'|`` with its location and the derivatives at the transition ends."""
    cutoff = quintic_cutoff() if cutoff is None else cutoff
    t = np.linspace(cutoff.lo, cutoff.hi, samples)
    slope = np.abs(cutoff.derivative(t))
    i = int(np.argmax(slope))
    ends = np.array([cutoff.lo, cutoff.hi])
    return {
        **cutoff.describe(),
        "sup_derivative": float(slope[i]),
        "argmax": float(t[i]),
        "derivative_at_ends": [float(v) for v in cutoff.derivative(ends)],
        "second_at_ends": [float(v) for v in cutoff.second(ends)],
    }


__all__ = [
    "Cutoff",
    "Profile",
    "linear_cutoff",
    "quintic_cutoff",
    "smoothstep",
    "theta_profile_report",
]
