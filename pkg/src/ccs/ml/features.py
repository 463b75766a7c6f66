"""Geometric feature extraction for text cells.

Features are purely geometric plus style flags and text statistics (no raw
text content), so the same pipeline serves programmatic and OCR-derived
cells. Coordinates are normalized by the page size; neighbor distances stay
in points.
"""

from __future__ import annotations

import math

import numpy as np

from ..model import ParsedPage

FEATURE_SCHEMA_VERSION = 1

# Fixed direction order; used for neighbor distances and one-hot label blocks.
DIRECTIONS = ("left", "below", "right", "above")

BASE_FEATURE_NAMES = (
    "page_number",
    "width_pt",
    "height_pt",
    "x0_norm",
    "y0_norm",
    "x1_norm",
    "y1_norm",
    "dist_left_pt",
    "dist_below_pt",
    "dist_right_pt",
    "dist_above_pt",
    "italic",
    "bold",
    "font_size_pt",  # extension beyond position/size/distances
    "numeric_fraction",
    "char_count",  # extension beyond position/size/distances
)


def neighbor_graph(page: ParsedPage) -> np.ndarray:
    """Nearest neighbor cell id per direction, -1 when absent.

    The neighbor in direction d is the cell with minimal center distance
    whose center lies in the quadrant cone of d and whose projected interval
    (y for left/right, x for below/above) overlaps the source cell's.
    Distance ties break toward the lower cell id.
    """
    cells = page.cells
    n = len(cells)
    out = np.full((n, 4), -1, dtype=np.int32)
    if n == 0:
        return out
    boxes = [c.bbox for c in cells]
    centers = [b.center for b in boxes]
    for i in range(n):
        bi = boxes[i]
        cxi, cyi = centers[i]
        best = [(-1, math.inf)] * 4
        for j in range(n):
            if j == i:
                continue
            bj = boxes[j]
            dx = centers[j][0] - cxi
            dy = centers[j][1] - cyi
            dist = math.hypot(dx, dy)
            y_overlap = min(bi.y1, bj.y1) > max(bi.y0, bj.y0)
            x_overlap = min(bi.x1, bj.x1) > max(bi.x0, bj.x0)
            if dx < 0 and abs(dy) <= -dx and y_overlap and dist < best[0][1]:
                best[0] = (j, dist)
            if dy < 0 and abs(dx) <= -dy and x_overlap and dist < best[1][1]:
                best[1] = (j, dist)
            if dx > 0 and abs(dy) <= dx and y_overlap and dist < best[2][1]:
                best[2] = (j, dist)
            if dy > 0 and abs(dx) <= dy and x_overlap and dist < best[3][1]:
                best[3] = (j, dist)
        out[i] = [b[0] for b in best]
    return out


def _gap(page: ParsedPage, cells, i: int, d: int, j: int) -> float:
    """Facing-edge gap to neighbor j, or page-edge distance when j < 0."""
    b = cells[i].bbox
    w, h = page.geometry.width, page.geometry.height
    if j < 0:
        return (b.x0, b.y0, w - b.x1, h - b.y1)[d]
    nb = cells[j].bbox
    if d == 0:
        return b.x0 - nb.x1
    if d == 1:
        return b.y0 - nb.y1
    if d == 2:
        return nb.x0 - b.x1
    return nb.y0 - b.y1


def extract_features(page: ParsedPage) -> np.ndarray:
    """Base feature matrix, one row per cell in cell-id order."""
    cells = page.cells
    n = len(cells)
    X = np.zeros((n, len(BASE_FEATURE_NAMES)), dtype=np.float64)
    if n == 0:
        return X
    neighbors = neighbor_graph(page)
    w = page.geometry.width
    h = page.geometry.height
    for i, cell in enumerate(cells):
        b = cell.bbox
        text = cell.text
        digits = sum(ch.isdigit() for ch in text)
        X[i, 0] = page.geometry.page_number
        X[i, 1] = b.width
        X[i, 2] = b.height
        X[i, 3] = b.x0 / w
        X[i, 4] = b.y0 / h
        X[i, 5] = b.x1 / w
        X[i, 6] = b.y1 / h
        for d in range(4):
            X[i, 7 + d] = _gap(page, cells, i, d, int(neighbors[i, d]))
        X[i, 11] = 1.0 if cell.style.italic else 0.0
        X[i, 12] = 1.0 if cell.style.bold else 0.0
        X[i, 13] = cell.style.font_size
        X[i, 14] = digits / len(text) if text else 0.0
        X[i, 15] = len(text)
    return X


def augment_with_neighbor_labels(
    X_base: np.ndarray, neighbors: np.ndarray, labels: np.ndarray, n_labels: int
) -> np.ndarray:
    """Append 4 one-hot blocks encoding the labels of directional neighbors.

    Absent neighbors contribute an all-zero block. `labels` holds label
    indices per cell (the previous refinement stage's predictions).
    """
    n, base = X_base.shape
    out = np.zeros((n, base + 4 * n_labels), dtype=np.float64)
    out[:, :base] = X_base
    for d in range(4):
        ids = neighbors[:, d]
        has = ids >= 0
        rows = np.flatnonzero(has)
        if rows.size:
            cols = base + d * n_labels + labels[ids[rows]]
            out[rows, cols] = 1.0
    return out
