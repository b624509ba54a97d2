"""Minimal solutions of ``du/dzbar = g`` on planar model domains.

- Problems on polar grids with a weight field (``DbarProblem``)
- The Cauchy transform, computed mode by mode (``cauchy_transform``) and a
  direct kernel sum for cross-checks (``cauchy_quadrature``)
- Least weighted norm solutions: the Cauchy transform minus its weighted
  Bergman projection (``minimal_dbar_solution``)
- Solutions vanishing to order ``m`` at a puncture, measured against
  ``|z|^{-2m} e^{-phi}`` (``singular_weight_solve``)
- The scalar twisted estimate and removable-puncture checks

## Example

```python
from jetex.bergman import WeightField, quadratic_phi
from jetex.dbar import DbarProblem, hormander_estimate_check, minimal_dbar_solution
from jetex.model import ModelDomain, make_grid

grid = make_grid(ModelDomain.disc(1.0), (32, 64))
problem = DbarProblem.on_grid(grid, grid.z.conj())
minimal_dbar_solution(problem).norm_squared     # pi / 12

weighted = DbarProblem.on_grid(grid, 1.0, WeightField.from_function(grid, quadratic_phi(1.0)))
hormander_estimate_check(weighted)["ratio"]     # < 1
```
"""

from __future__ import annotations

from ._cauchy import cauchy_quadrature, cauchy_transform, ring_mode_transform
from ._checks import EXTENSION_SLOPE, hormander_estimate_check, puncture_extension_check
from ._problem import CurvatureOperatorData, DbarProblem, dbar_residual
from ._solve import DbarSolution, minimal_dbar_solution, singular_weight_solve, taylor_part

__all__ = [
    # Problems
    "CurvatureOperatorData",
    "DbarProblem",
    "DbarSolution",
    "dbar_residual",
    # Particular solutions
    "cauchy_quadrature",
    "cauchy_transform",
    "ring_mode_transform",
    "taylor_part",
    # Solvers
    "minimal_dbar_solution",
    "singular_weight_solve",
    # Checks
    "EXTENSION_SLOPE",
    "hormander_estimate_check",
    "puncture_extension_check",
]
