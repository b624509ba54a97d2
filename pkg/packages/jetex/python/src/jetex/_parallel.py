"""Thread fan-out for independent runs, capped by the lab ``threads`` option."""

from __future__ import annotations

import contextvars
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from jetex._config import get_lab_config

T = TypeVar("T")
R = TypeVar("R")


def map_runs(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map over independent runs, on ``threads`` workers when configured.

    Results keep the order of ``items``. Each worker runs in a copy of the
    caller's context, so lab options set around the call stay in force.
    """
    threads = get_lab_config().threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        futures = [pool.submit(contextvars.copy_context().run, fn, item) for item in items]
        return [future.result() for future in futures]


__all__ = ["map_runs"]
