"""Richardson extrapolation over the bump-width schedule."""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Any

import numpy as np

from jetex._errors import PreconditionError


def richardson(epsilons: Sequence[float], values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fit ``v(eps) = v0 + v1 * eps`` by least squares along the first axis.

    A single width returns its own value with zero slope.

    Returns:
        ``(v0, v1)``, each shaped like one entry of ``values``
    """
    eps = np.asarray(epsilons, dtype=float)
    data = np.asarray(values)
    if eps.ndim != 1 or eps.size == 0 or data.shape[0] != eps.size:
        raise PreconditionError(
            f"Need one value per epsilon, got {data.shape[0] if data.ndim else 0} "
            f"values for {eps.size} epsilons"
        )
    if eps.size == 1:
        return data[0], np.zeros_like(data[0])
    design = np.stack([np.ones_like(eps), eps], axis=1)
    flat = data.reshape(eps.size, -1)
    fit, *_ = np.linalg.lstsq(design, flat, rcond=None)
    shape = data.shape[1:]
    return fit[0].reshape(shape), fit[1].reshape(shape)


def extrapolate_norms(epsilons: Sequence[float], norms: Sequence[float]) -> dict[str, Any]:
    """Extrapolate weighted norms to ``eps -> 0`` and check their stability.

    The change between consecutive widths is compared with the envelope
    ``(eps + 1 / log(eps)^2) * |limit|``.

    Example:
        >>> report = extrapolate_norms([0.1, 0.05], [2.1, 2.05])
        >>> round(report["limit"], 12), report["stable"]
        (2.0, True)
    """
    order = np.argsort(np.asarray(epsilons, dtype=float))[::-1]
    eps = np.asarray(epsilons, dtype=float)[order]
    values = np.asarray(norms, dtype=float)[order]
    if np.any(eps <= 0):
        raise PreconditionError("Bump widths must be positive")
    limit, slope = richardson(eps, values)
    changes = [float(abs(b - a)) for a, b in zip(values[:-1], values[1:], strict=True)]
    envelope = [
        float((e + 1.0 / math.log(e) ** 2) * abs(float(limit))) for e in eps[1:]
    ]
    return {
        "epsilons": [float(e) for e in eps],
        "values": [float(v) for v in values],
        "limit": float(limit),
        "slope": float(slope),
        "changes": changes,
        "envelope": envelope,
        "stable": all(c <= b for c, b in zip(changes, envelope, strict=True)),
    }


__all__ = ["extrapolate_norms", "richardson"]
