"""Raw snippet streams to homogeneous single-line text cells.

The rules, applied per baseline group:
  1. wide space runs inside a snippet split it (multi-column text that a
     writer emitted as one instruction),
  2. fragments whose horizontal gap is under merge_gap_em ems join, with
     a space inserted when the gap looks like a word break,
  3. vertical ruling lines crossing a cell split it at the rule,
  4. a leading list marker becomes its own cell.

Every non-whitespace character of the input survives exactly once; only
whitespace is invented or dropped.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass, field

from ..model import BBox, CellStyle, PageGeometry, PathSegment, TextCell
from .snippets import FontInfo, RawSnippet

DEFAULT_LIST_MARKERS = (
    r"[•▪●◦⁃]",
    r"[-–—]",
    r"\([0-9a-zA-Z]{1,3}\)",
    r"[0-9]{1,3}\.",
    r"[ivxlcIVXLC]{1,4}\.",
)

# Word-break threshold: gaps at least this many median-char-widths wide
# get a space when fragments merge.
_SPACE_GAP = 0.5

_BASELINE_TOL = 0.25


@dataclass(frozen=True)
class NormalizationConfig:
    max_cell_width_fraction: float | None = None
    merge_gap_em: float = 1.0
    split_gap_em: float = 2.0
    list_marker_patterns: tuple[str, ...] = DEFAULT_LIST_MARKERS

    def __post_init__(self):
        if self.merge_gap_em >= self.split_gap_em:
            raise ValueError("merge_gap_em must be below split_gap_em")

    def marker_regex(self) -> re.Pattern:
        alts = "|".join(f"(?:{p})" for p in self.list_marker_patterns)
        return re.compile(rf"^({alts})\s+\S")


@dataclass
class NormalizationReport:
    """Counts of what normalization did to one page."""

    dropped_blank: int = 0
    merges: int = 0
    gap_splits: int = 0
    rule_splits: int = 0
    marker_splits: int = 0
    width_splits: int = 0


@dataclass
class _Fragment:
    """Mutable cell-in-progress."""

    x0: float
    y0: float
    x1: float
    y1: float
    text: str
    font: FontInfo
    # (font, char count) per merged piece, for dominant-style election.
    pieces: list[tuple[FontInfo, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.pieces:
            self.pieces = [(self.font, len(self.text))]

    def char_width(self) -> float:
        n = len(self.text)
        return (self.x1 - self.x0) / n if n else 0.0

    def dominant_font(self) -> FontInfo:
        best = self.pieces[0]
        for p in self.pieces[1:]:
            if p[1] > best[1]:
                best = p
        return best[0]


def _line_groups(snippets: list[RawSnippet]) -> list[list[RawSnippet]]:
    """Group snippets by baseline, anchored at each group's first member."""
    ordered = sorted(snippets, key=lambda s: (-s.baseline_y, s.bbox.x0))
    groups: list[list[RawSnippet]] = []
    ref_baseline = 0.0
    ref_size = 0.0
    for s in ordered:
        size = s.font.size if s.font.size > 0 else 10.0
        if groups and abs(ref_baseline - s.baseline_y) < _BASELINE_TOL * min(ref_size, size):
            groups[-1].append(s)
        else:
            groups.append([s])
            ref_baseline = s.baseline_y
            ref_size = size
    return groups


def _median_char_width(snippets: list[RawSnippet]) -> float:
    widths: list[float] = []
    for s in snippets:
        n = len(s.text)
        if n:
            widths.extend([(s.bbox.x1 - s.bbox.x0) / n] * n)
    return statistics.median(widths) if widths else 0.0


def _split_wide_runs(s: RawSnippet, mcw: float, threshold: float, report) -> list[_Fragment]:
    """Rule: split one snippet at space runs wider than the split gap."""
    text = s.text
    cw = (s.bbox.x1 - s.bbox.x0) / len(text) if text else 0.0
    parts: list[tuple[int, int]] = []  # [start, end) of kept pieces
    start = None
    for m in re.finditer(r"\S+", text):
        if start is None:
            start = m.start()
            end = m.end()
            continue
        run = m.start() - end
        if mcw > 0 and run * cw > threshold:
            parts.append((start, end))
            start = m.start()
        end = m.end()
    if start is not None:
        parts.append((start, end))
    out = []
    for i, (a, b) in enumerate(parts):
        x0 = s.bbox.x0 + a * cw
        x1 = s.bbox.x0 + b * cw if i < len(parts) - 1 else s.bbox.x1
        out.append(_Fragment(x0, s.bbox.y0, x1, s.bbox.y1, text[a:b], s.font))
    report.gap_splits += max(0, len(out) - 1)
    return out


def _merge_line(frags: list[_Fragment], mcw: float, merge_gap: float, report) -> list[_Fragment]:
    frags.sort(key=lambda f: f.x0)
    out: list[_Fragment] = []
    for f in frags:
        if out and mcw > 0 and f.x0 - out[-1].x1 < merge_gap:
            prev = out[-1]
            gap = f.x0 - prev.x1
            joiner = " " if gap >= _SPACE_GAP * mcw else ""
            prev.text = prev.text + joiner + f.text
            prev.x1 = max(prev.x1, f.x1)
            prev.y0 = min(prev.y0, f.y0)
            prev.y1 = max(prev.y1, f.y1)
            prev.pieces.extend(f.pieces)
            report.merges += 1
        else:
            out.append(f)
    return out


def _cut_fragment(f: _Fragment, x: float) -> tuple[_Fragment, _Fragment] | None:
    """Split f at device x, snapping the text cut to the nearest char."""
    cw = f.char_width()
    if cw <= 0:
        return None
    i = round((x - f.x0) / cw)
    i = max(1, min(len(f.text) - 1, i))
    left_text = f.text[:i].rstrip()
    right_text = f.text[i:].lstrip()
    if not left_text or not right_text:
        return None
    left = _Fragment(f.x0, f.y0, x, f.y1, left_text, f.font, list(f.pieces))
    right = _Fragment(x, f.y0, f.x1, f.y1, right_text, f.font, list(f.pieces))
    return left, right


def _split_at_rules(frags: list[_Fragment], verticals: list[PathSegment], report) -> list[_Fragment]:
    out: list[_Fragment] = []
    queue = list(frags)
    while queue:
        f = queue.pop(0)
        height = f.y1 - f.y0
        cut = None
        for seg in verticals:
            x = seg.p0[0]
            if not (f.x0 < x < f.x1):
                continue
            lo, hi = seg.y_extent()
            overlap = min(hi, f.y1) - max(lo, f.y0)
            if height > 0 and overlap >= 0.5 * height:
                cut = x
                break
        if cut is None:
            out.append(f)
            continue
        pieces = _cut_fragment(f, cut)
        if pieces is None:
            out.append(f)
        else:
            report.rule_splits += 1
            queue.insert(0, pieces[1])
            queue.insert(0, pieces[0])
    return out


def _split_markers(frags: list[_Fragment], marker: re.Pattern, report) -> list[_Fragment]:
    out = []
    for f in frags:
        m = marker.match(f.text)
        if m:
            cw = f.char_width()
            cut_at = f.x0 + m.end(1) * cw
            pieces = _cut_fragment(f, cut_at)
            if pieces is not None:
                report.marker_splits += 1
                out.extend(pieces)
                continue
        out.append(f)
    return out


def _split_width_cap(frags: list[_Fragment], max_width: float, report) -> list[_Fragment]:
    out = []
    queue = list(frags)
    while queue:
        f = queue.pop(0)
        if f.x1 - f.x0 <= max_width:
            out.append(f)
            continue
        # cut at the space nearest the middle of the text
        spaces = [m.start() for m in re.finditer(r" ", f.text)]
        if not spaces:
            out.append(f)
            continue
        mid = len(f.text) / 2
        at = min(spaces, key=lambda i: abs(i - mid))
        pieces = _cut_fragment(f, f.x0 + at * f.char_width())
        if pieces is None:
            out.append(f)
        else:
            report.width_splits += 1
            queue.insert(0, pieces[1])
            queue.insert(0, pieces[0])
    return out


def normalize_cells(
    snippets: list[RawSnippet],
    paths: list[PathSegment],
    geometry: PageGeometry,
    config: NormalizationConfig | None = None,
) -> tuple[list[TextCell], NormalizationReport]:
    config = config or NormalizationConfig()
    report = NormalizationReport()
    kept = []
    for s in snippets:
        if not s.text.strip() or s.bbox.x1 <= s.bbox.x0 or s.bbox.y1 <= s.bbox.y0:
            report.dropped_blank += 1
        else:
            kept.append(s)

    marker = config.marker_regex()
    all_frags: list[_Fragment] = []
    verticals = [p for p in paths if p.is_vertical()]
    for line in _line_groups(kept):
        mcw = _median_char_width(line)
        frags: list[_Fragment] = []
        for s in line:
            frags.extend(_split_wide_runs(s, mcw, config.split_gap_em * mcw, report))
        frags = _merge_line(frags, mcw, config.merge_gap_em * mcw, report)
        frags = _split_at_rules(frags, verticals, report)
        frags = _split_markers(frags, marker, report)
        if config.max_cell_width_fraction is not None:
            cap = config.max_cell_width_fraction * geometry.width
            frags = _split_width_cap(frags, cap, report)
        all_frags.extend(frags)

    all_frags.sort(key=lambda f: (-f.y1, f.x0))
    cells = []
    for i, f in enumerate(all_frags):
        font = f.dominant_font()
        cells.append(
            TextCell(
                id=i,
                bbox=BBox(f.x0, f.y0, f.x1, f.y1),
                text=f.text,
                style=CellStyle(italic=font.italic, bold=font.bold, font_size=font.size),
            )
        )
    return cells, report
