"""The convex profile ``chi0`` and the bumped weights ``sigma``, ``eta``, ``lambda``.

For a section ``s`` with ``|s| <= 1/e`` and ``0 < epsilon < 1/e``::

    sigma  = log(|s|^2 + epsilon^2)                  (<= 0)
    eta    = epsilon - chi0(sigma)                   (> 0, large near Y)
    lambda = chi0'(sigma)^2 / chi0''(sigma)          (= (2 - sigma)^2)

with ``chi0(t) = t - log(1 - t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
from scipy import optimize

from jetex._errors import PreconditionError
from jetex.jets import SECTION_BOUND

from ._cutoff import Cutoff, quintic_cutoff

# Constants in "eta <= (1 + O(eps)) sigma^2", "lambda <= (3 + O(eps)) sigma^2" and
# "eta + lambda <= (4 + O(eps)) sigma^2", compared against measured values.
CLAIMED_CONSTANTS = {"eta": 1.0, "lambda": 3.0, "sum": 4.0}
SIGMA_RANGE = (-40.0, -2.0)


class ChiValues(NamedTuple):
    value: np.ndarray | float
    first: np.ndarray | float
    second: np.ndarray | float


class BumpedWeights(NamedTuple):
    sigma: np.ndarray | float
    eta: np.ndarray | float
    lam: np.ndarray | float


def _scalar_or_array(arr: np.ndarray) -> np.ndarray | float:
    return float(arr) if arr.ndim == 0 else arr


def chi0(t: np.ndarray | float) -> ChiValues:
    """``chi0(t) = t - log(1 - t)`` with its first and second derivative.

    Raises:
        PreconditionError: If any ``t > 0``

    Example:
        >>> chi0(0.0)
        ChiValues(value=0.0, first=2.0, second=1.0)
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr > 0):
        raise PreconditionError(f"chi0 is defined on t <= 0, got max t = {np.max(arr):.6g}")
    value = arr - np.log1p(-arr)
    first = 1.0 + 1.0 / (1.0 - arr)
    second = 1.0 / (1.0 - arr) ** 2
    return ChiValues(_scalar_or_array(value), _scalar_or_array(first), _scalar_or_array(second))


def claimed_lambda(sigma: np.ndarray | float) -> np.ndarray | float:
    """The closed form ``(1 - sigma)^2 + (1 - sigma)`` kept for comparison.

    It differs from the definition ``chi0'^2 / chi0''``, which equals
    ``(2 - sigma)^2``; reports print both.
    """
    one_minus = 1.0 - np.asarray(sigma, dtype=float)
    return _scalar_or_array(one_minus**2 + one_minus)


@dataclass(frozen=True)
class BumpProfile:
    """Bump parameter ``epsilon`` together with the cutoff ``theta``.

    Attributes:
        epsilon: Width of the bump, ``0 < epsilon < 1/e``
        cutoff: ``theta``, 1 on ``(-inf, 1/2]`` and 0 on ``[1, inf)`` by default
    """

    epsilon: float
    cutoff: Cutoff = field(default_factory=quintic_cutoff)

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < SECTION_BOUND:
            raise PreconditionError(f"epsilon must lie in (0, 1/e), got {self.epsilon}")
        self.cutoff.validate()

    def theta(self, s_abs: np.ndarray | float) -> np.ndarray:
        """``theta(|s|^2 / epsilon^2)``."""
        return self.cutoff.value(np.asarray(s_abs, dtype=float) ** 2 / self.epsilon**2)

    def theta_prime(self, s_abs: np.ndarray | float) -> np.ndarray:
        """``theta'(|s|^2 / epsilon^2)``."""
        return self.cutoff.derivative(np.asarray(s_abs, dtype=float) ** 2 / self.epsilon**2)

    def describe(self) -> dict[str, Any]:
        return {"epsilon": self.epsilon, "cutoff": self.cutoff.describe()}


def _weights_from_sigma(sigma: np.ndarray, epsilon: float) -> tuple[np.ndarray, ...]:
    chi = chi0(sigma)
    eta = epsilon - np.asarray(chi.value)
    lam = np.asarray(chi.first) ** 2 / np.asarray(chi.second)
    return eta, lam


def sigma_eta_lambda(s_abs: np.ndarray | float, profile: BumpProfile) -> BumpedWeights:
    """Evaluate ``sigma``, ``eta`` and ``lambda`` at section moduli ``|s|``.

    ``lambda`` is computed from its definition ``chi0'(sigma)^2 / chi0''(sigma)``.

    Raises:
        PreconditionError: If some ``|s| > 1/e``

    Example:
        >>> w = sigma_eta_lambda(0.0, BumpProfile(math.exp(-2)))
        >>> round(w.sigma, 12), round(w.lam, 9)
        (-4.0, 36.0)
    """
    arr = np.asarray(s_abs, dtype=float)
    if np.any(arr > SECTION_BOUND * (1 + 1e-12)):
        raise PreconditionError(f"|s| <= 1/e violated: max |s| = {np.max(arr):.6g}")
    sigma = np.log(arr**2 + profile.epsilon**2)
    eta, lam = _weights_from_sigma(sigma, profile.epsilon)
    return BumpedWeights(
        _scalar_or_array(sigma), _scalar_or_array(eta), _scalar_or_array(lam)
    )


def scalar_estimate_suite(
    profile: BumpProfile, sigma_grid: np.ndarray | None = None
) -> dict[str, Any]:
    """Measure the sups of ``eta``, ``lambda`` and ``eta + lambda`` over ``sigma^2``.

    ``eta`` and ``lambda`` are evaluated as functions of ``sigma`` over
    ``sigma_grid`` (default: 2000 points spread over ``[-40, -2]``). The
    measured constants are compared with ``CLAIMED_CONSTANTS``; a positive
    ``excess`` means the measured value is above the claim.

    Raises:
        PreconditionError: If ``epsilon > 1e-2`` or the grid leaves ``[-40, -2]``
    """
    if profile.epsilon > 1e-2:
        raise PreconditionError(
            f"Scalar estimates are measured for epsilon <= 1e-2, got {profile.epsilon}"
        )
    lo, hi = SIGMA_RANGE
    sigma = (
        np.linspace(lo, hi, 2000) if sigma_grid is None else np.asarray(sigma_grid, dtype=float)
    )
    if sigma.size == 0 or np.min(sigma) < lo - 1e-12 or np.max(sigma) > hi + 1e-12:
        raise PreconditionError(f"sigma grid must be a nonempty subset of [{lo}, {hi}]")
    sigma = np.sort(sigma)
    eta, lam = _weights_from_sigma(sigma, profile.epsilon)
    ratios = {"eta": eta / sigma**2, "lambda": lam / sigma**2, "sum": (eta + lam) / sigma**2}

    measured = {name: float(np.max(values)) for name, values in ratios.items()}
    if not all(math.isfinite(v) for v in measured.values()):
        raise PreconditionError("Scalar estimate constants are not finite")
    return {
        "epsilon": profile.epsilon,
        "measured": measured,
        "claimed": dict(CLAIMED_CONSTANTS),
        "excess": {name: measured[name] - CLAIMED_CONSTANTS[name] for name in measured},
        # sigma ascends, so ratios must ascend toward sigma = -2
        "decreasing_to_minus_infinity": all(
            bool(np.all(np.diff(values) >= -1e-12)) for values in ratios.values()
        ),
        "lambda_definition_vs_claim": {
            "sigma": float(sigma[-1]),
            "definition": float(lam[-1]),
            "claimed_form": float(claimed_lambda(sigma[-1])),
        },
    }


def eta_threshold(alpha: float = 1.0, samples: int = 400) -> dict[str, Any]:
    """Largest ``epsilon`` for which ``epsilon - log(e^{-2 alpha} + epsilon^2) >= 2 alpha``.

    This lower bound for ``eta`` on ``|s| <= e^{-alpha}`` gives ``eta >= 2 alpha``
    below the threshold. The exact ``eta`` is scanned on ``samples`` values of
    ``epsilon`` below the threshold at the worst point ``|s| = e^{-alpha}``.

    Returns:
        Dict with ``alpha``, ``epsilon`` (the threshold), ``bounded`` (False when
        the bound holds up to ``1/e``) and ``min_margin`` (``min eta - 2 alpha``)

    Raises:
        PreconditionError: If ``alpha < 1``
    """
    if alpha < 1:
        raise PreconditionError(f"alpha >= 1 is required, got {alpha}")
    s_max = math.exp(-alpha)

    def bound_margin(epsilon: float) -> float:
        return epsilon - math.log(s_max**2 + epsilon**2) - 2.0 * alpha

    upper = SECTION_BOUND * (1 - 1e-12)
    bounded = bound_margin(upper) < 0
    threshold = optimize.brentq(bound_margin, 1e-12, upper, xtol=1e-14) if bounded else upper

    epsilons = np.linspace(threshold / samples, threshold, samples)
    sigma = np.log(s_max**2 + epsilons**2)
    eta = epsilons - np.asarray(chi0(sigma).value)
    return {
        "alpha": alpha,
        "epsilon": float(threshold),
        "bounded": bool(bounded),
        "min_margin": float(np.min(eta - 2.0 * alpha)),
    }


def g1_factor_check(profile: BumpProfile, samples: int = 2001) -> dict[str, Any]:
    """Check ``(1 + |s|^2/epsilon^2) / chi0'(sigma) <= 2`` on ``|s| < epsilon``."""
    s_abs = np.linspace(0.0, profile.epsilon, samples, endpoint=False)
    weights = sigma_eta_lambda(s_abs, profile)
    factor = (1.0 + s_abs**2 / profile.epsilon**2) / np.asarray(chi0(weights.sigma).first)
    peak = float(np.max(factor))
    return {"epsilon": profile.epsilon, "max_factor": peak, "holds": peak <= 2.0}


__all__ = [
    "BumpProfile",
    "BumpedWeights",
    "CLAIMED_CONSTANTS",
    "ChiValues",
    "SIGMA_RANGE",
    "chi0",
    "claimed_lambda",
    "eta_threshold",
    "g1_factor_check",
    "scalar_estimate_suite",
    "sigma_eta_lambda",
]
