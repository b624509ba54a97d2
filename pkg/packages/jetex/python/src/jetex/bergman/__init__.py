"""Weighted Bergman spaces and minimal-norm holomorphic extension.

- Weight fields ``e^{-phi}`` with optional singular factors ``|s|^{-2m}`` and
  ``(-log|s|)^{-2}`` (``WeightField``)
- Monomial bases and weighted Gram matrices (``BasisSpec``, ``gram_matrix``)
- Least-norm holomorphic extension of a point jet (``minimal_jet_extension``)
- The point-jet extension constant with the weight ``|z - z0|^{-2(n - eps)}``
  (``verify_corollary_bound``)
- Parseval identity and Cauchy-type derivative control on discs

## Minimal extension

```python
from jetex.bergman import BasisSpec, WeightField, minimal_jet_extension, real_part_phi
from jetex.jets import JetData
from jetex.model import ModelDomain, make_grid

domain = ModelDomain.disc(1.0)
grid = make_grid(domain, (32, 64))
weight = WeightField.from_function(grid, real_part_phi())
fit = minimal_jet_extension(domain, grid, weight, JetData.at_point([1.0]), BasisSpec(12))
fit.norm_squared, fit.constraint_residual
```

For radial weights the monomials are orthogonal and the minimal extension of a
jet at the center is its Taylor polynomial.
"""

from __future__ import annotations

from ._checks import derivative_control, parseval_check, taylor_at
from ._extension import (
    ExtensionFit,
    minimal_jet_extension,
    taylor_constraints,
    verify_corollary_bound,
)
from ._gram import BasisSpec, GramData, bergman_projection, gram_matrix, orthogonality_residual
from ._weight import (
    PhiFunction,
    WeightField,
    parse_phi,
    quadratic_phi,
    real_part_phi,
    smoothed_real_part_phi,
)

__all__ = [
    # Weights
    "PhiFunction",
    "WeightField",
    "parse_phi",
    "quadratic_phi",
    "real_part_phi",
    "smoothed_real_part_phi",
    # Gram systems
    "BasisSpec",
    "GramData",
    "bergman_projection",
    "gram_matrix",
    "orthogonality_residual",
    # Extension
    "ExtensionFit",
    "minimal_jet_extension",
    "taylor_constraints",
    "verify_corollary_bound",
    # Checks
    "derivative_control",
    "parseval_check",
    "taylor_at",
]
