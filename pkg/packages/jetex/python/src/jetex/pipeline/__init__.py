"""Inductive construction of holomorphic extensions of transversal jets.

- ``ExtensionProblem``: a jet on ``Y``, the weight ``phi`` and grid
  parameters for setup A (disc, ``Y = {0}``) or B (bidisc, ``Y = {z1 = 0}``)
- Smooth liftings glued from charts (``smooth_extension``) and their
  truncation by the cutoff (``truncate``)
- ``construct_extension`` runs ``F_j = G - u + F_{j-1}`` for ``j = 0..k`` at
  one bump width; ``run_induction`` repeats it over a schedule of widths and
  extrapolates to ``eps -> 0``
- Measured constants over batches of jets and weight strengths

## Example

```python
from jetex.jets import JetData
from jetex.pipeline import ExtensionProblem, constant_batch, run_induction

problem = ExtensionProblem("A", JetData.at_point([1.0, 0.5]))
result = run_induction(problem)
result.coefficients[:2, 0]          # ~[1.0, 0.5]
result.constant                     # norm of F_k over the jet norm

constant_batch(problem)["C_measured"]
```
"""

from __future__ import annotations

from ._constants import (
    MIN_BATCH,
    SWEEP_STRENGTHS,
    constant_batch,
    jet_batch,
    measure_constant,
    sweep_jet_order,
    sweep_weight_strength,
)
from ._extrapolate import extrapolate_norms, richardson
from ._induction import (
    EXTRA_ORDERS,
    ExtensionResult,
    InductionRun,
    LevelRecord,
    construct_extension,
    direct_minimal_extension,
    jet_data_norm,
    run_induction,
    truncation_norm,
)
from ._lift import (
    Chart,
    SmoothLift,
    Transversal,
    single_chart,
    smooth_extension,
    taylor_components,
    taylor_lift,
    truncate,
    two_charts,
)
from ._problem import (
    DEFAULT_EPSILONS,
    EXCISION_MARGIN,
    ExtensionProblem,
    Setup,
    polynomial_jet,
)

__all__ = [
    # Problems
    "DEFAULT_EPSILONS",
    "EXCISION_MARGIN",
    "ExtensionProblem",
    "Setup",
    "polynomial_jet",
    # Liftings
    "Chart",
    "SmoothLift",
    "Transversal",
    "single_chart",
    "smooth_extension",
    "taylor_components",
    "taylor_lift",
    "truncate",
    "two_charts",
    # Induction
    "EXTRA_ORDERS",
    "ExtensionResult",
    "InductionRun",
    "LevelRecord",
    "construct_extension",
    "direct_minimal_extension",
    "jet_data_norm",
    "run_induction",
    "truncation_norm",
    # Extrapolation
    "extrapolate_norms",
    "richardson",
    # Constants
    "MIN_BATCH",
    "SWEEP_STRENGTHS",
    "constant_batch",
    "jet_batch",
    "measure_constant",
    "sweep_jet_order",
    "sweep_weight_strength",
]
