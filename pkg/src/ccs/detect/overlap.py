"""Detector boxes to per-cell table labels, and the confidence sweep."""

from __future__ import annotations

from ..errors import EmptyInputError
from ..model import TextCell
from .types import Detection, SweepPoint, SweepResult

MIN_OVERLAP = 0.5


def overlap_labeling(
    cells: list[TextCell],
    detections: list[Detection],
    threshold: float,
    min_overlap: float = MIN_OVERLAP,
) -> list[bool]:
    """True where a cell is covered by a surviving detection.

    A detection survives when its confidence is at or above the
    threshold; a cell counts as covered when the intersection is at
    least ``min_overlap`` of the cell's own area.
    """
    live = [d for d in detections if d.confidence >= threshold]
    out = []
    for cell in cells:
        area = cell.bbox.area
        hit = False
        if area > 0:
            for d in live:
                if cell.bbox.intersection_area(d.bbox) >= min_overlap * area:
                    hit = True
                    break
        out.append(hit)
    return out


def _prf(pred: list[bool], truth: list[bool]) -> tuple[float, float, float]:
    tp = sum(1 for p, t in zip(pred, truth) if p and t)
    fp = sum(1 for p, t in zip(pred, truth) if p and not t)
    fn = sum(1 for p, t in zip(pred, truth) if not p and t)
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 1.0
    return precision, recall, f1


def sweep_confidence(
    detections: list[Detection],
    truth: list[bool],
    cells: list[TextCell],
    min_overlap: float = MIN_OVERLAP,
) -> SweepResult:
    """Evaluate every decision-relevant threshold and pick the F1 peak.

    The labeling is a step function of the threshold, changing only at
    the distinct confidence values, so evaluating those plus 0 and 1
    covers all of [0, 1]. Ties break toward the lowest threshold.
    """
    if not cells:
        raise EmptyInputError("no cells to sweep over")
    if len(truth) != len(cells):
        raise EmptyInputError(f"{len(truth)} truth labels for {len(cells)} cells")
    thresholds = sorted({0.0, 1.0} | {d.confidence for d in detections})
    points = []
    best = None
    for t in thresholds:
        pred = overlap_labeling(cells, detections, t, min_overlap)
        precision, recall, f1 = _prf(pred, truth)
        points.append(SweepPoint(threshold=t, precision=precision, recall=recall, f1=f1))
        if best is None or f1 > best.f1:
            best = points[-1]
    return SweepResult(points=tuple(points), best_threshold=best.threshold, best_f1=best.f1)
