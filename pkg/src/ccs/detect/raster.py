"""Geometry-only page rendering.

The raster shows cell rectangles and ruling lines, never glyphs, so a
detector trained on it cannot latch onto any particular script. Row 0 is
the top edge of the page.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import BadScaleError
from ..model import ParsedPage

BACKGROUND = 255
CELL_INTENSITY = 128
PATH_INTENSITY = 0


@dataclass(frozen=True)
class LayoutRaster:
    width: int
    height: int
    pixels: np.ndarray = field(repr=False)
    scale: float  # points per pixel

    def foreground_fraction(self) -> float:
        return float(np.count_nonzero(self.pixels != BACKGROUND)) / self.pixels.size


def render_layout_image(page: ParsedPage, scale: float = 2.0) -> LayoutRaster:
    """Render a page's geometry at ``scale`` pixels per point."""
    if not (scale > 0) or not math.isfinite(scale):
        raise BadScaleError(f"scale must be a positive number, got {scale}")
    geom = page.geometry
    width = max(1, round(geom.width * scale))
    height = max(1, round(geom.height * scale))
    img = np.full((height, width), BACKGROUND, dtype=np.uint8)

    def col(x: float) -> int:
        return min(width - 1, max(0, int(x * scale)))

    def row(y: float) -> int:
        return min(height - 1, max(0, height - 1 - int(y * scale)))

    for cell in page.cells:
        b = cell.bbox
        x0 = max(0, int(math.floor(b.x0 * scale)))
        x1 = min(width, int(math.ceil(b.x1 * scale)))
        y_top = max(0, height - int(math.ceil(b.y1 * scale)))
        y_bot = min(height, height - int(math.floor(b.y0 * scale)))
        img[y_top:y_bot, x0:x1] = CELL_INTENSITY

    for seg in page.paths:
        (ax, ay), (bx, by) = seg.p0, seg.p1
        steps = max(2, int(math.hypot(bx - ax, by - ay) * scale) * 2)
        ts = np.linspace(0.0, 1.0, steps)
        cols = np.clip((np.array(ax + ts * (bx - ax)) * scale).astype(int), 0, width - 1)
        rows = np.clip(height - 1 - (np.array(ay + ts * (by - ay)) * scale).astype(int), 0, height - 1)
        img[rows, cols] = PATH_INTENSITY

    return LayoutRaster(width=width, height=height, pixels=img, scale=1.0 / scale)
