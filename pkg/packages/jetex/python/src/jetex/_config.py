"""Lab-wide numerical options.

Provides a context manager to control default resolutions, tolerances and
solver safeguards used across every jetex subpackage.
"""

from __future__ import annotations

import os
from collections.abc import Generator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace

from jetex._sentinel import MISSING, MissingType


@dataclass(frozen=True)
class LabConfig:
    """Numerical options shared by grids, solvers and integrators.

    Attributes:
        excision_ratio: Default excision radius as a fraction of the domain radius
        radial_nodes: Default Gauss-Legendre nodes per radial panel
        angular_nodes: Default trapezoid nodes per angle
        holomorphy_tol: Largest spectral dbar residual accepted as holomorphic
        condition_limit: Largest Gram condition number accepted
        jitter_scale: Diagonal jitter (times trace) applied when Cholesky fails
        ode_rtol: Relative tolerance of the adaptive Runge-Kutta integrator
        ode_atol: Absolute tolerance of the adaptive Runge-Kutta integrator
        threads: Upper bound on worker threads for independent runs
    """

    excision_ratio: float = 1e-3
    radial_nodes: int = 32
    angular_nodes: int = 64
    holomorphy_tol: float = 1e-8
    condition_limit: float = 1e12
    jitter_scale: float = 1e-12
    ode_rtol: float = 1e-9
    ode_atol: float = 1e-12
    threads: int = 1


_lab_config: ContextVar[LabConfig | None] = ContextVar("_lab_config", default=None)


def get_lab_config() -> LabConfig:
    """Get current lab configuration.

    Example:
        >>> get_lab_config().condition_limit
        1000000000000.0
    """
    config = _lab_config.get()
    if config is None:
        config = LabConfig()
        _lab_config.set(config)
    return config


@contextmanager
def set_lab_options(
    excision_ratio: float | MissingType = MISSING,
    radial_nodes: int | MissingType = MISSING,
    angular_nodes: int | MissingType = MISSING,
    holomorphy_tol: float | MissingType = MISSING,
    condition_limit: float | MissingType = MISSING,
    jitter_scale: float | MissingType = MISSING,
    ode_rtol: float | MissingType = MISSING,
    ode_atol: float | MissingType = MISSING,
    threads: int | MissingType = MISSING,
) -> Generator[LabConfig, None, None]:
    """Temporarily set lab options.

    Only specified parameters are updated; others retain their current values.
    Options are compared against ``MISSING`` by identity, so zero-valued options
    such as ``excision_ratio=0.0`` are honoured.

    Yields:
        New LabConfig with updated settings

    Example:
        >>> with set_lab_options(radial_nodes=48):
        ...     get_lab_config().radial_nodes
        48
    """
    given = {
        "excision_ratio": excision_ratio,
        "radial_nodes": radial_nodes,
        "angular_nodes": angular_nodes,
        "holomorphy_tol": holomorphy_tol,
        "condition_limit": condition_limit,
        "jitter_scale": jitter_scale,
        "ode_rtol": ode_rtol,
        "ode_atol": ode_atol,
        "threads": threads,
    }
    changes = {name: value for name, value in given.items() if value is not MISSING}
    new_config = replace(get_lab_config(), **changes)

    token = _lab_config.set(new_config)
    try:
        yield new_config
    finally:
        _lab_config.reset(token)


def threads_from_env(default: int = 1) -> int:
    """Read the ``JETEX_THREADS`` cap, falling back to ``default``.

    Raises:
        ValueError: If the variable is set but is not a positive integer
    """
    raw = os.environ.get("JETEX_THREADS")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        msg = f"JETEX_THREADS must be a positive integer, got {raw!r}"
        raise ValueError(msg) from e
    if value < 1:
        msg = f"JETEX_THREADS must be a positive integer, got {raw!r}"
        raise ValueError(msg)
    return value


__all__ = ["LabConfig", "get_lab_config", "set_lab_options", "threads_from_env"]
