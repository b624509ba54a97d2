"""The constant ``C_{r,k}``, Lagrange's inequality and the Taylor-limit lemma."""

from __future__ import annotations

import math
from typing import Any

import numpy as np
from scipy import integrate

from jetex._errors import NonIntegrableDataError, PreconditionError
from jetex.jets import FlatSetup, Lift, transversal_jet
from jetex.model import multiindices_of_order

from ._cutoff import Cutoff, quintic_cutoff
from ._profile import BumpProfile

_MC_CHUNK = 1_000_000


def _resolve_cutoff(cutoff: Cutoff | BumpProfile | None) -> Cutoff:
    if cutoff is None:
        return quintic_cutoff()
    return cutoff.cutoff if isinstance(cutoff, BumpProfile) else cutoff


def _check_support(cutoff: Cutoff) -> None:
    if cutoff.lo <= 0:
        raise NonIntegrableDataError(
            f"theta' of {cutoff.name!r} does not vanish near 0; the C_rk integral diverges"
        )
    interior = np.linspace(0.0, cutoff.lo, 65)[1:-1]
    if np.any(cutoff.derivative(interior) != 0):
        raise NonIntegrableDataError(
            f"theta' of {cutoff.name!r} is nonzero below t = {cutoff.lo}; "
            "the C_rk integral diverges"
        )


def c_rk_constant(r: int, k: int, cutoff: Cutoff | BumpProfile | None = None) -> float:
    """``C_{r,k} = int_{|z| <= 1} theta'(|z|^2)^2 i L(dz) ^ L(dzbar) / |z|^{2(r+k)}``.

    ``L`` is the top exterior power in ``C^r``, so ``i L(dz) ^ L(dzbar)`` is
    ``2^r`` times Lebesgue measure. With ``t = |z|^2`` the integral becomes::

        (2 pi)^r / (r - 1)! * int theta'(t)^2 t^(-1 - k) dt

    over the transition of ``theta``.

    Raises:
        PreconditionError: If ``r < 1`` or ``k < 0``
        NonIntegrableDataError: If ``theta'`` does not vanish near ``t = 0``

    Example:
        >>> round(c_rk_constant(1, 0) / (2 * math.pi), 4)
        3.849
    """
    if r < 1 or k < 0:
        raise PreconditionError(f"C_rk needs r >= 1 and k >= 0, got r={r}, k={k}")
    theta = _resolve_cutoff(cutoff)
    _check_support(theta)

    def integrand(t: float) -> float:
        return float(theta.derivative(np.array(t))) ** 2 * t ** (-1.0 - k)

    value, _ = integrate.quad(integrand, theta.lo, theta.hi, epsabs=0.0, epsrel=1e-11, limit=200)
    return (2.0 * math.pi) ** r / math.factorial(r - 1) * value


def c_rk_monte_carlo(
    r: int,
    k: int,
    cutoff: Cutoff | BumpProfile | None = None,
    n_samples: int = 10**6,
    seed: int = 0,
) -> tuple[float, float]:
    """Monte Carlo estimate of ``C_{r,k}`` from uniform points in the unit ball of ``C^r``.

    Returns:
        ``(estimate, standard_error)``
    """
    if r < 1 or k < 0:
        raise PreconditionError(f"C_rk needs r >= 1 and k >= 0, got r={r}, k={k}")
    theta = _resolve_cutoff(cutoff)
    _check_support(theta)
    rng = np.random.default_rng(seed)
    dim = 2 * r
    volume = math.pi**r / math.factorial(r)

    total = 0.0
    total_sq = 0.0
    remaining = n_samples
    while remaining > 0:
        size = min(remaining, _MC_CHUNK)
        directions = rng.standard_normal((size, dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        points = directions * rng.random((size, 1)) ** (1.0 / dim)
        t = np.sum(points**2, axis=1)
        values = np.zeros(size)
        active = t >= theta.lo
        values[active] = theta.derivative(t[active]) ** 2 / t[active] ** (r + k)
        total += float(np.sum(values))
        total_sq += float(np.sum(values**2))
        remaining -= size

    mean = total / n_samples
    variance = max(total_sq / n_samples - mean**2, 0.0)
    scale = 2.0**r * volume
    return scale * mean, scale * math.sqrt(variance / n_samples)


def lagrange_inequality_check(s: np.ndarray, a: np.ndarray, rtol: float = 1e-12) -> bool:
    """``|<a, s>|^2 <= |a|^2 |s|^2`` for complex r-vectors.

    This is the form taken by ``i{D's, D's} >= i{D's, s} ^ {s, D's} / |s|^2``
    once both sides are evaluated on a tangent vector.

    Raises:
        PreconditionError: If ``s = 0``
    """
    s_vec = np.asarray(s, dtype=complex).ravel()
    a_vec = np.asarray(a, dtype=complex).ravel()
    if s_vec.shape != a_vec.shape:
        raise PreconditionError(f"s and a differ in length: {s_vec.size} != {a_vec.size}")
    s_norm = float(np.vdot(s_vec, s_vec).real)
    if s_norm == 0.0:
        raise PreconditionError("Lagrange's inequality is stated for s != 0")
    lhs = abs(np.vdot(s_vec, a_vec)) ** 2
    rhs = float(np.vdot(a_vec, a_vec).real) * s_norm
    return lhs <= rhs * (1 + rtol)


def lagrange_batch(
    n_pairs: int = 10_000, max_rank: int = 4, seed: int = 0
) -> dict[str, Any]:
    """Random pairs ``(s, a)`` with ``r <= max_rank``; all must satisfy the inequality."""
    rng = np.random.default_rng(seed)
    ranks = rng.integers(1, max_rank + 1, size=n_pairs)
    failures = 0
    worst = 0.0
    for r in ranks:
        s = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        a = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        if not lagrange_inequality_check(s, a):
            failures += 1
        ratio = abs(np.vdot(s, a)) ** 2 / (np.vdot(a, a).real * np.vdot(s, s).real)
        worst = max(worst, float(ratio))
    return {"pairs": n_pairs, "failures": failures, "max_ratio": worst, "holds": failures == 0}


def _ball_samples(r: int, n_radii: int, n_angles: int) -> np.ndarray:
    """Points of the closed unit ball in ``C^r``: polar rings, or a fixed net of directions."""
    radii = np.linspace(0.0, 1.0, n_radii)
    angles = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    if r == 1:
        return (radii[:, None] * angles[None, :]).reshape(-1, 1)
    rng = np.random.default_rng(12345)
    directions = rng.standard_normal((n_angles, r)) + 1j * rng.standard_normal((n_angles, r))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return (radii[:, None, None] * directions[None, :, :]).reshape(-1, r)


def taylor_limit_check(
    difference: Lift,
    setup: FlatSetup,
    k: int,
    epsilons: np.ndarray | None = None,
    rate_floor: float = 0.9,
) -> dict[str, Any]:
    """Check ``|h(eps s, z')|^2 / eps^{2k} -> |P_k(s, z')|^2`` as ``eps -> 0``.

    ``h = f~ - F_{k-1}`` must vanish to order ``k - 1`` on Y; ``P_k`` is its
    homogeneous transversal Taylor part of degree ``k``. The deviation
    ``D(eps)`` is the sup over ``|s| <= 1`` and the Y-nodes. When ``h`` has
    a remainder, ``log D`` is fitted against ``log eps`` and the fitted rate
    must reach ``rate_floor``.

    Returns:
        Dict with ``epsilons``, ``deviations``, ``rate`` (``inf`` when every
        deviation is at roundoff level), ``limit_sup`` and ``converges``

    Raises:
        PreconditionError: If ``h`` does not vanish to order ``k - 1`` on Y
    """
    if k < 0:
        raise PreconditionError(f"Jet order must be nonnegative, got {k}")
    eps = 2.0 ** -np.arange(1, 7) if epsilons is None else np.asarray(epsilons, dtype=float)
    jet = transversal_jet(difference, setup, k).to_jet()
    scale = max(1.0, float(np.max(np.abs(jet.as_matrix()))))
    low = [jet.coefficient(alpha) for j in range(k) for alpha in multiindices_of_order(setup.r, j)]
    if low and np.max(np.abs(np.stack(low))) > 1e-8 * scale:
        raise PreconditionError(f"The difference does not vanish to order {k - 1} on Y")

    r = setup.r
    n = setup.grid.domain.ambient_dim
    s = _ball_samples(r, 17, 32)
    y_nodes = setup.y_grid.nodes
    center = np.asarray(setup.grid.domain.center, dtype=complex)
    top = multiindices_of_order(r, k)
    monomials = np.stack([alpha.monomial(s) for alpha in top], axis=1)
    coefficients = np.stack([jet.coefficient(alpha) for alpha in top], axis=1)
    # rows: Y-nodes, columns: ball samples
    limit = np.abs(coefficients @ monomials.T) ** 2

    deviations = []
    for e in eps:
        points = np.empty((len(y_nodes), len(s), n), dtype=complex)
        points[:, :, :r] = center[:r] + e * s[None, :, :]
        if n > r:
            points[:, :, r:] = y_nodes[:, None, y_nodes.shape[1] - (n - r) :]
        values = np.asarray(difference(points.reshape(-1, points.shape[-1])), dtype=complex)
        ratio = np.abs(values.reshape(len(y_nodes), len(s))) ** 2 / e ** (2 * k)
        deviations.append(float(np.max(np.abs(ratio - limit))))

    limit_sup = float(np.max(limit))
    floor = 1e-10 * max(1.0, limit_sup)
    devs = np.asarray(deviations)
    if np.all(devs <= floor):
        rate = math.inf
    else:
        rate = float(np.polyfit(np.log(eps), np.log(np.maximum(devs, floor)), 1)[0])
    return {
        "k": k,
        "epsilons": [float(e) for e in eps],
        "deviations": deviations,
        "rate": rate,
        "limit_sup": limit_sup,
        "converges": rate >= rate_floor,
    }


__all__ = [
    "c_rk_constant",
    "c_rk_monte_carlo",
    "lagrange_batch",
    "lagrange_inequality_check",
    "taylor_limit_check",
]
