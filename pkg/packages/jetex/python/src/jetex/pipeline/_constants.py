"""Measured extension constants over batches of jets."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np

from jetex._errors import PreconditionError
from jetex._parallel import map_runs
from jetex._sentinel import MISSING, MissingType
from jetex.jets import JetData

from ._induction import ExtensionResult, run_induction
from ._problem import ExtensionProblem, polynomial_jet

logger = logging.getLogger(__name__)

MIN_BATCH = 10
SWEEP_STRENGTHS = (0.0, 1.0, 4.0)


def jet_batch(
    problem: ExtensionProblem, n_random: int = MIN_BATCH, seed: int = 0
) -> list[JetData]:
    """Unit jets ``e_j`` for ``j <= k``, then ``n_random`` seeded random jets of each order.

    The random jets of order ``j`` are drawn from ``default_rng([seed, j])`` and
    padded with zeros to order ``k``, so the batch for ``k`` contains the batch
    for every lower order. Coefficients are complex Gaussian; in setup B each
    coefficient is affine in ``z2``.

    Example:
        >>> problem = ExtensionProblem("A", JetData.at_point([1.0, 0.0]))
        >>> batch = jet_batch(problem, n_random=2)
        >>> len(batch), batch[1].as_matrix()[:, 0].tolist()
        (6, [0j, (1+0j)])
    """
    k = problem.k
    width = 1 if problem.setup == "A" else 2
    jets = []
    for j in range(k + 1):
        rows = np.zeros((k + 1, 1), dtype=complex)
        rows[j, 0] = 1.0
        jets.append(polynomial_jet(problem.setup, rows, problem.y_grid))
    for j in range(k + 1):
        rng = np.random.default_rng([seed, j])
        for _ in range(n_random):
            rows = np.zeros((k + 1, width), dtype=complex)
            rows[: j + 1] = rng.standard_normal((j + 1, width)) + 1j * rng.standard_normal(
                (j + 1, width)
            )
            jets.append(polynomial_jet(problem.setup, rows, problem.y_grid))
    return jets


def measure_constant(results: Iterable[ExtensionResult]) -> dict[str, Any]:
    """Sup and spread of ``norm(F_k) / norm(f)`` over a batch.

    Zero jets (``0/0``) are excluded and counted.

    Returns:
        Dict with ``C_measured`` (the sup), ``spread`` (max over min),
        ``ratios``, ``count``, ``excluded`` and ``finite``

    Raises:
        PreconditionError: If fewer than ``MIN_BATCH`` nonzero jets remain
    """
    ratios: list[float] = []
    excluded = 0
    for result in results:
        if result.data_norm <= 0:
            excluded += 1
            continue
        ratios.append(result.constant)
    if len(ratios) < MIN_BATCH:
        raise PreconditionError(
            f"measure_constant needs at least {MIN_BATCH} nonzero jets, got {len(ratios)}"
        )
    values = np.asarray(ratios)
    sup = float(np.max(values))
    low = float(np.min(values))
    return {
        "C_measured": sup,
        "spread": sup / low if low > 0 else math.inf,
        "ratios": [float(v) for v in values],
        "count": len(ratios),
        "excluded": excluded,
        "finite": math.isfinite(sup),
    }


def constant_batch(
    problem: ExtensionProblem,
    n_random: int = MIN_BATCH,
    seed: int = 0,
    epsilons: Sequence[float] = (1e-2,),
    delta: float | MissingType = MISSING,
    basis_degree: int = 12,
) -> dict[str, Any]:
    """Run the induction on :func:`jet_batch` and measure the constant.

    The problem supplies the setup, weight, order ``k`` and grids; its own
    jet is not part of the batch.
    """
    jets = jet_batch(problem, n_random, seed)

    def extend(jet: JetData) -> ExtensionResult:
        return run_induction(problem.with_jet(jet), epsilons, delta, basis_degree)

    results = map_runs(extend, jets)
    report = measure_constant(results)
    logger.info(
        "setup=%s k=%d phi=%s C_measured=%.6g spread=%.3g",
        problem.setup,
        problem.k,
        problem.phi,
        report["C_measured"],
        report["spread"],
    )
    return {
        "setup": problem.setup,
        "k": problem.k,
        "phi": problem.phi,
        "epsilons": [float(e) for e in epsilons],
        "seed": seed,
        **report,
    }


def sweep_weight_strength(
    problem: ExtensionProblem,
    strengths: Sequence[float] = SWEEP_STRENGTHS,
    n_random: int = MIN_BATCH,
    seed: int = 0,
    epsilons: Sequence[float] = (1e-2,),
    delta: float | MissingType = MISSING,
) -> list[dict[str, Any]]:
    """Measured constant for the quadratic weights ``A |z1|^2``, one row per ``A``.

    Only the measured dependence on ``A`` is reported; no functional form is fitted.
    """
    rows = []
    for strength in strengths:
        weighted = problem.with_phi(f"radial:quadratic:{strength:g}")
        report = constant_batch(weighted, n_random, seed, epsilons, delta)
        rows.append(
            {
                "strength": float(strength),
                "phi": weighted.phi,
                "C_measured": report["C_measured"],
                "spread": report["spread"],
            }
        )
    return rows


def sweep_jet_order(
    problem: ExtensionProblem,
    max_order: int = 2,
    n_random: int = MIN_BATCH,
    seed: int = 0,
    epsilons: Sequence[float] = (1e-2,),
    delta: float | MissingType = MISSING,
    rtol: float = 1e-6,
) -> dict[str, Any]:
    """Measured constant for jet orders ``0..max_order`` on the problem's setup and weight.

    The batches are nested (see :func:`jet_batch`), so the sup over order
    ``k`` ranges over a superset of the jets of order ``k - 1`` and must not
    decrease beyond ``rtol``.

    Returns:
        Dict with one ``rows`` entry per order, ``min_step`` (smallest
        ``C_{k+1} / C_k``) and ``nondecreasing``

    Raises:
        PreconditionError: If ``max_order`` is negative
    """
    if max_order < 0:
        raise PreconditionError(f"max_order must be nonnegative, got {max_order}")
    rows = []
    for order in range(max_order + 1):
        unit = np.zeros((order + 1, 1), dtype=complex)
        unit[0, 0] = 1.0
        ordered = problem.with_jet(polynomial_jet(problem.setup, unit, problem.y_grid))
        rows.append(constant_batch(ordered, n_random, seed, epsilons, delta))
    constants = [row["C_measured"] for row in rows]
    steps = [high / low for low, high in zip(constants, constants[1:], strict=False) if low > 0]
    return {
        "rows": rows,
        "min_step": min(steps) if steps else math.nan,
        "nondecreasing": all(
            high >= low * (1.0 - rtol) for low, high in zip(constants, constants[1:], strict=False)
        ),
    }


__all__ = [
    "MIN_BATCH",
    "SWEEP_STRENGTHS",
    "constant_batch",
    "jet_batch",
    "measure_constant",
    "sweep_jet_order",
    "sweep_weight_strength",
]
