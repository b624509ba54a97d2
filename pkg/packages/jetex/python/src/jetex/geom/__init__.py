"""Jacobi fields and comparison geometry on model Riemannian charts.

- Models with known curvature: constant curvature in conformal charts,
  polynomial surfaces of revolution and conformally perturbed flat surfaces
  (``parse_model`` reads their names)
- Geodesics with a parallel orthonormal frame and Jacobi fields integrated
  along them; ``exp_differential`` is ``T_x exp_m`` in that frame
- Comparison checks: the sin/sinh Gronwall bounds, the Rauch-type deviation
  of ``T_x exp_m`` from the identity, the curvature radius ``r_{a,k}`` and
  metric equivalence on small balls
- Primitives: the inversion radius of a smooth map and the radial primitive
  of a closed 2-form

## Example

```python
import numpy as np
from jetex.geom import constant_curvature, exp_differential, rauch_deviation_check

sphere = constant_curvature(1.0)
exp_differential(sphere, np.zeros(2), np.array([1.0, 0.0]))   # diag(1, sin 1)

xs = np.array([[0.5, 0.0], [0.0, 1.0]])
rauch_deviation_check(sphere, np.zeros(2), xs)["holds"]       # True
```

Only isotropic models are built, so ``R(Y, V)V = K (|V|^2 Y - <Y, V> V)``
and the curvature norm is ``|K|``; see ``CURVATURE_NORM``.
"""

from __future__ import annotations

from ._comparison import (
    CurvatureSample,
    admissible_a,
    curvature_radius,
    gronwall_batch,
    gronwall_bounds_check,
    metric_equivalence_check,
    random_curvature_sample,
    rauch_bound,
    rauch_deviation_check,
    sample_tangent_ball,
)
from ._flow import (
    UNIT_SPEED_TOL,
    GeodesicState,
    GeodesicTrajectory,
    JacobiState,
    JacobiTrajectory,
    exp_differential,
    frame_orthonormality,
    gauss_lemma_check,
    geodesic,
    jacobi_field,
)
from ._models import (
    CURVATURE_NORM,
    FD_STEP,
    PointFunction,
    RiemannianModel,
    central_difference,
    constant_curvature,
    gaussian_bump,
    parse_model,
    perturbed_flat,
    second_difference,
    surface_of_revolution,
)
from ._primitives import (
    HESSIAN_STEP,
    PoincarePrimitive,
    SmoothMap,
    TwoForm,
    inversion_radius,
    poincare_primitive,
    primitive_one_form,
    random_exact_form,
)

__all__ = [
    # Models
    "CURVATURE_NORM",
    "FD_STEP",
    "PointFunction",
    "RiemannianModel",
    "constant_curvature",
    "gaussian_bump",
    "parse_model",
    "perturbed_flat",
    "surface_of_revolution",
    # Finite differences
    "central_difference",
    "second_difference",
    # Geodesic flow
    "UNIT_SPEED_TOL",
    "GeodesicState",
    "GeodesicTrajectory",
    "JacobiState",
    "JacobiTrajectory",
    "exp_differential",
    "frame_orthonormality",
    "gauss_lemma_check",
    "geodesic",
    "jacobi_field",
    # Comparison
    "CurvatureSample",
    "admissible_a",
    "curvature_radius",
    "gronwall_batch",
    "gronwall_bounds_check",
    "metric_equivalence_check",
    "random_curvature_sample",
    "rauch_bound",
    "rauch_deviation_check",
    "sample_tangent_ball",
    # Primitives
    "HESSIAN_STEP",
    "PoincarePrimitive",
    "SmoothMap",
    "TwoForm",
    "inversion_radius",
    "poincare_primitive",
    "primitive_one_form",
    "random_exact_form",
]
