"""Deterministic reading order via recursive XY-cut.

A cell group splits at its widest full-width horizontal gap; failing
that, at its widest full-height vertical gap (the column case); groups
with no empty gap are emitted in raster order. Ties between equally
wide gaps go to the topmost respectively leftmost gap.
"""

from __future__ import annotations

from ..model import ParsedPage, TextCell


def _merged_intervals(spans: list[tuple[float, float]]) -> list[tuple[float, float]]:
    spans = sorted(spans)
    out = [spans[0]]
    for lo, hi in spans[1:]:
        if lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _widest_gap(spans: list[tuple[float, float]], prefer_low: bool) -> tuple[float, float] | None:
    """Widest empty interval between merged spans; None when contiguous.

    prefer_low breaks ties toward the lower coordinate (leftmost column
    gap); otherwise toward the higher one (topmost line gap).
    """
    merged = _merged_intervals(spans)
    best = None
    for (_, a_hi), (b_lo, _) in zip(merged, merged[1:]):
        width = b_lo - a_hi
        if width <= 0:
            continue
        better = best is None or width > best[1] - best[0]
        same = best is not None and width == best[1] - best[0]
        if better or (same and not prefer_low):
            best = (a_hi, b_lo)
    return best


def _order(cells: list[TextCell], out: list[int]) -> None:
    if len(cells) <= 1:
        out.extend(c.id for c in cells)
        return
    gap = _widest_gap([(c.bbox.y0, c.bbox.y1) for c in cells], prefer_low=False)
    if gap is not None:
        top = [c for c in cells if c.bbox.y0 >= gap[1]]
        bottom = [c for c in cells if c.bbox.y0 < gap[1]]
        _order(top, out)
        _order(bottom, out)
        return
    gap = _widest_gap([(c.bbox.x0, c.bbox.x1) for c in cells], prefer_low=True)
    if gap is not None:
        left = [c for c in cells if c.bbox.x1 <= gap[0]]
        right = [c for c in cells if c.bbox.x1 > gap[0]]
        _order(left, out)
        _order(right, out)
        return
    for c in sorted(cells, key=lambda c: (-c.bbox.y1, c.bbox.x0, c.id)):
        out.append(c.id)


def reading_order(page: ParsedPage) -> list[int]:
    """Cell ids of the page in reading order; a bijection on the ids."""
    out: list[int] = []
    _order(list(page.cells), out)
    return out
