"""Export quadrature grids as CSV dumps and SVG previews.

Key use cases:
1. Inspect node placement of excised or paneled grids
2. Feed grid dumps to external plotting or quadrature cross-checks
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import svg

from jetex._sentinel import MISSING, MissingType

if TYPE_CHECKING:
    from ._grid import QuadGrid


def grid_csv_header(grid: QuadGrid) -> list[str]:
    columns: list[str] = []
    for dim in range(grid.nodes.shape[1]):
        columns += [f"re_z{dim + 1}", f"im_z{dim + 1}"]
    return columns + ["weight"]


def export_grid_csv(grid: QuadGrid, output_path: str | Path) -> Path:
    """Write one row per node: real/imaginary part per dimension, then weight.

    Example:
        >>> from jetex.model import ModelDomain, make_grid
        >>> path = export_grid_csv(make_grid(ModelDomain.disc(), (8, 8)), "grid.csv")
    """
    output_path = Path(output_path).expanduser()
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(grid_csv_header(grid))
        for point, weight in zip(grid.nodes, grid.weights, strict=True):
            row: list[str] = []
            for coord in point:
                row += [repr(float(coord.real)), repr(float(coord.imag))]
            row.append(repr(float(weight)))
            writer.writerow(row)
    return output_path


def export_grid_svg(
    grid: QuadGrid,
    output_path: str | Path,
    size: int | MissingType = MISSING,
    variable: int = 0,
) -> Path:
    """Draw the nodes of one complex coordinate as dots sized by quadrature weight.

    Args:
        grid: Grid to draw
        output_path: Path to write the SVG file
        size: Width and height in pixels (default: 400)
        variable: Which complex coordinate to project onto the plane

    Note:
        Repeated projections of product grids are drawn once per node, so the
        preview of a polydisc shows overlapping dots.
    """
    pixels = size or 400
    points = grid.nodes[:, variable]
    center = grid.domain.center[variable]
    if grid.domain.kind == "polydisc":
        extent = grid.domain.radii[variable]
    else:
        extent = grid.domain.outer_radius
    half = pixels / 2.0
    scale = 0.95 * half / extent

    peak = float(np.max(grid.weights)) if len(grid) else 1.0
    elements: list[svg.Element] = [
        svg.Circle(
            cx=half,
            cy=half,
            r=extent * scale,
            fill="none",
            stroke="#888888",
            stroke_width=1,
        )
    ]
    if grid.excision_radius > 0:
        elements.append(
            svg.Circle(
                cx=half,
                cy=half,
                r=max(grid.excision_radius * scale, 0.5),
                fill="none",
                stroke="#cc3333",
                stroke_width=1,
            )
        )
    for point, weight in zip(points, grid.weights, strict=True):
        offset = point - center
        elements.append(
            svg.Circle(
                cx=round(half + scale * offset.real, 3),
                cy=round(half - scale * offset.imag, 3),
                r=round(0.5 + 2.5 * math.sqrt(weight / peak), 3),
                fill="#1f4e79",
            )
        )

    root = svg.SVG(
        width=pixels,
        height=pixels,
        viewBox=f"0 0 {pixels} {pixels}",  # type: ignore[arg-type]
        elements=elements,
    )

    output_path = Path(output_path).expanduser()
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(str(root))
    return output_path


__all__ = ["export_grid_csv", "export_grid_svg", "grid_csv_header"]
