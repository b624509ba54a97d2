"""Multi-indices over transversal directions."""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, order=True)
class MultiIndex:
    """A multi-index ``alpha`` in ``N^r``.

    Ordering is lexicographic on ``entries``.

    Example:
        >>> alpha = MultiIndex((2, 1))
        >>> alpha.order, alpha.factorial
        (3, 2)
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("MultiIndex needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"MultiIndex entries must be nonnegative, got {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def order(self) -> int:
        """Total degree ``|alpha|``."""
        return sum(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def factorial(self) -> int:
        """``alpha! = prod(alpha_i!)``."""
        return math.prod(math.factorial(e) for e in self.entries)

    def monomial(self, points: np.ndarray) -> np.ndarray:
        """Evaluate ``z**alpha`` at points of shape ``(N, r)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        return np.prod(pts[:, : self.dim] ** np.asarray(self.entries), axis=1)

    def binomial(self, other: MultiIndex) -> int:
        """``prod(binom(other_i, self_i))``; zero unless ``self <= other`` entrywise."""
        return math.prod(math.comb(b, a) for a, b in zip(self.entries, other.entries, strict=True))

    def below(self, other: MultiIndex) -> bool:
        """True when ``self <= other`` entrywise."""
        return all(a <= b for a, b in zip(self.entries, other.entries, strict=True))

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.entries) + ")"


def multiindices_upto(r: int, k: int) -> list[MultiIndex]:
    """All multi-indices in ``N^r`` of order at most ``k``, lexicographically sorted.

    Example:
        >>> [str(a) for a in multiindices_upto(2, 1)]
        ['(0,0)', '(0,1)', '(1,0)']
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return [
        MultiIndex(entries)
        for entries in itertools.product(range(k + 1), repeat=r)
        if sum(entries) <= k
    ]


def multiindices_of_order(r: int, j: int) -> list[MultiIndex]:
    """Multi-indices of exact order ``j``."""
    return [alpha for alpha in multiindices_upto(r, j) if alpha.order == j]


def as_multiindex(alpha: MultiIndex | Sequence[int] | int) -> MultiIndex:
    if isinstance(alpha, MultiIndex):
        return alpha
    if isinstance(alpha, int):
        return MultiIndex((alpha,))
    return MultiIndex(tuple(alpha))


__all__ = ["MultiIndex", "as_multiindex", "multiindices_of_order", "multiindices_upto"]
