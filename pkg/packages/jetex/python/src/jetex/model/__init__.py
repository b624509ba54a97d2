"""Model domains, quadrature grids and multi-index utilities.

This subpackage provides the discretization every other jetex module builds on:

- Model domains: disc, annulus, ball in C^2, bidisc (``ModelDomain``)
- Polar Gauss-Legendre x trapezoid grids with optional excision of a
  neighbourhood of the submanifold and radial panels (``make_grid``)
- Quadrature sums (``integrate``)
- Multi-indices over transversal directions (``MultiIndex``, ``multiindices_upto``)
- Spectral ``d/dz``, ``d/dzbar`` and radial interpolation on polar grids
- CSV dumps and SVG previews of grids

## Grids

Planar grids are tensor grids: radial Gauss-Legendre nodes (one rule per
panel) times equispaced angles. Polynomials in ``(z, zbar)`` of moderate degree
integrate to machine precision:

```python
from jetex.model import ModelDomain, integrate, make_grid

grid = make_grid(ModelDomain.disc(1.0), (32, 64))
integrate(grid, abs(grid.z) ** 2)   # pi / 2
```

Excision removes the nodes with ``|z - center| < delta``; singular weights such
as ``|z|^{-2m}`` are only ever sampled on excised grids. Breakpoints split the
radial interval so that cutoff shells and geometric refinement near the
puncture are integrated panel by panel:

```python
from jetex.model import geometric_breakpoints

grid = make_grid(
    ModelDomain.disc(1.0),
    (24, 32),
    excision_radius=1e-3,
    breakpoints=geometric_breakpoints(1e-3, 1.0),
)
```

The submanifold ``Y = {point}`` carries counting measure (``point_grid``).
Grids of a disc centered at an interior point other than the center come from
``star_grid``.
"""

from __future__ import annotations

from ._domain import DomainKind, ModelDomain
from ._export import export_grid_csv, export_grid_svg
from ._grid import (
    PolarLayout,
    QuadGrid,
    geometric_breakpoints,
    integrate,
    make_grid,
    point_grid,
    star_grid,
)
from ._multiindex import MultiIndex, as_multiindex, multiindices_of_order, multiindices_upto
from ._spectral import (
    angular_modes,
    holomorphy_residual,
    polar_d,
    polar_dbar,
    radial_interpolate,
    spectral_d,
    spectral_dbar,
)

__all__ = [
    # Domains and grids
    "DomainKind",
    "ModelDomain",
    "PolarLayout",
    "QuadGrid",
    "geometric_breakpoints",
    "integrate",
    "make_grid",
    "point_grid",
    "star_grid",
    # Multi-indices
    "MultiIndex",
    "as_multiindex",
    "multiindices_of_order",
    "multiindices_upto",
    # Spectral calculus
    "angular_modes",
    "holomorphy_residual",
    "polar_d",
    "polar_dbar",
    "radial_interpolate",
    "spectral_d",
    "spectral_dbar",
    # Export
    "export_grid_csv",
    "export_grid_svg",
]
