"""Alignment-based table detector.

A deliberately simple baseline occupying the detector seam: it flags
regions where at least three consecutive rows each hold two or more
cells whose left edges line up. Neural detectors plug in through the
same interface and format.
"""

from __future__ import annotations

import statistics

from ..model import ParsedPage, TextCell
from .types import Detection

MIN_ROWS = 3
MIN_COLS = 2


def _rows_of(cells: list[TextCell], tol: float) -> list[list[TextCell]]:
    ordered = sorted(cells, key=lambda c: (-c.bbox.center[1], c.bbox.x0))
    rows: list[list[TextCell]] = []
    anchor = 0.0
    for cell in ordered:
        y = cell.bbox.center[1]
        if rows and abs(anchor - y) <= tol:
            rows[-1].append(cell)
        else:
            rows.append([cell])
            anchor = y
    return rows


def _pair_score(a: list[TextCell], b: list[TextCell], tol: float) -> float:
    """Fraction of columns whose left edges match across two rows."""
    xs_b = [c.bbox.x0 for c in b]
    matched = sum(1 for c in a if any(abs(c.bbox.x0 - x) <= tol for x in xs_b))
    if matched < MIN_COLS:
        return 0.0
    return matched / max(len(a), len(b))


def heuristic_table_detector(page: ParsedPage) -> list[Detection]:
    cells = list(page.cells)
    if not cells:
        return []
    med_h = statistics.median(c.bbox.height for c in cells)
    tol = max(1.0, 0.6 * med_h)
    rows = _rows_of(cells, tol)

    detections: list[Detection] = []
    run: list[int] = []
    scores: list[float] = []

    def flush():
        if len(run) >= MIN_ROWS:
            boxes = [c.bbox for i in run for c in rows[i]]
            bbox = boxes[0]
            for b in boxes[1:]:
                bbox = bbox.union(b)
            confidence = min(1.0, sum(scores) / len(scores))
            detections.append(Detection(bbox=bbox, confidence=confidence, klass="table"))
        run.clear()
        scores.clear()

    for i, row in enumerate(rows):
        if len(row) < MIN_COLS:
            flush()
            continue
        if run:
            s = _pair_score(rows[run[-1]], row, tol)
            if s > 0:
                run.append(i)
                scores.append(s)
            else:
                flush()
                run.append(i)
        else:
            run.append(i)
    flush()
    return detections
