"""Transversal jets, the rho weight and rho-weighted jet norms.

A transversal k-jet along ``Y = {s = 0}`` is stored either as Taylor
coefficients (``JetData``, entries ``a_alpha``) or as derivatives
(``NablaJet``, entries ``nabla^alpha = alpha! a_alpha``). Both are sampled on
the Y-grid: a single node for ``Y = {point}``, a disc grid for a hyperplane
slice of the bidisc.

## Weights and norms

```python
from jetex.jets import JetData, linear_section, pointwise_jet_norm, rho_weight
from jetex.model import ModelDomain, make_grid, point_grid

grid = make_grid(ModelDomain.disc(1.0), (32, 64))
section = linear_section(grid, point_grid(0j))     # s = z / (2e)
rho = rho_weight(section, 0)                       # 1.0
pointwise_jet_norm(JetData.at_point([1, 1]), section, rho)   # 1 + 4 e^2
```

## Extraction from liftings

``transversal_jet`` accepts samples of a holomorphic lifting on a spectral
grid, or a callable. Liftings agreeing to order k on Y give the same jet.
"""

from __future__ import annotations

from ._data import (
    SECTION_BOUND,
    JetData,
    NablaJet,
    SectionData,
    jet_from_rows,
    linear_section,
    wedge_norm,
)
from ._nabla import FlatSetup, Lift, ring_coefficients, transversal_jet
from ._norms import corollary_norm_ratio, l2_jet_norm, pointwise_jet_field, pointwise_jet_norm
from ._rho import (
    CHART_RADIUS_FACTOR,
    normal_inverse_norm,
    r0_radius,
    rho_field,
    rho_refinement,
    rho_weight,
    section_sup,
)

__all__ = [
    # Data
    "JetData",
    "NablaJet",
    "SECTION_BOUND",
    "SectionData",
    "jet_from_rows",
    "linear_section",
    "wedge_norm",
    # Weights
    "CHART_RADIUS_FACTOR",
    "normal_inverse_norm",
    "r0_radius",
    "rho_field",
    "rho_refinement",
    "rho_weight",
    "section_sup",
    # Extraction
    "FlatSetup",
    "Lift",
    "ring_coefficients",
    "transversal_jet",
    # Norms
    "corollary_norm_ratio",
    "l2_jet_norm",
    "pointwise_jet_field",
    "pointwise_jet_norm",
]
