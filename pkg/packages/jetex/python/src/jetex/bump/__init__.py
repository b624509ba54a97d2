"""Weight bumping near Y: the profile ``chi0``, the cutoff ``theta`` and their estimates.

- ``chi0(t) = t - log(1 - t)`` and the bumped weights ``sigma``, ``eta``,
  ``lambda`` of a section ``s`` (``sigma_eta_lambda``)
- Cutoff profiles (``quintic_cutoff`` is the default ``theta``)
- Measured constants: the scalar estimates, ``C_{r,k}`` with a Monte Carlo
  cross-check, the ``eta >= 2 alpha`` threshold
- Pointwise inequalities on planar grids: Lagrange, the ``d d-bar sigma``
  lower bound, the bumped curvature bound and the ``8 theta'^2`` bound

## Example

```python
from jetex.bump import BumpProfile, c_rk_constant, scalar_estimate_suite

profile = BumpProfile(epsilon=1e-3)
scalar_estimate_suite(profile)["measured"]   # {"eta": ~0.775, "lambda": 4.0, "sum": ~4.78}
c_rk_constant(1, 0, profile)                 # ~24.18
```

``lambda`` is computed from ``chi0'^2 / chi0''``, which equals
``(2 - sigma)^2``; the closed form ``(1 - sigma)^2 + (1 - sigma)`` is kept as
``claimed_lambda`` and reported next to it.
"""

from __future__ import annotations

from ._constants import (
    c_rk_constant,
    c_rk_monte_carlo,
    lagrange_batch,
    lagrange_inequality_check,
    taylor_limit_check,
)
from ._curvature import bumped_curvature_check, ddbar_sigma_check, g1_bound_check
from ._cutoff import Cutoff, linear_cutoff, quintic_cutoff, smoothstep, theta_profile_report
from ._profile import (
    CLAIMED_CONSTANTS,
    SIGMA_RANGE,
    BumpedWeights,
    BumpProfile,
    ChiValues,
    chi0,
    claimed_lambda,
    eta_threshold,
    g1_factor_check,
    scalar_estimate_suite,
    sigma_eta_lambda,
)

__all__ = [
    # Profiles
    "BumpProfile",
    "BumpedWeights",
    "ChiValues",
    "Cutoff",
    "chi0",
    "claimed_lambda",
    "linear_cutoff",
    "quintic_cutoff",
    "sigma_eta_lambda",
    "smoothstep",
    # Scalar estimates
    "CLAIMED_CONSTANTS",
    "SIGMA_RANGE",
    "eta_threshold",
    "g1_factor_check",
    "scalar_estimate_suite",
    "theta_profile_report",
    # Constants
    "c_rk_constant",
    "c_rk_monte_carlo",
    # Inequalities
    "bumped_curvature_check",
    "ddbar_sigma_check",
    "g1_bound_check",
    "lagrange_batch",
    "lagrange_inequality_check",
    "taylor_limit_check",
]
