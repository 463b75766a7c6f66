"""Annotation records, correction diffs, and session-rate statistics.

An annotation is the ground truth for one page: a label per cell. It
either started from a blank page ("fresh") or from model predictions
("corrected-from-prediction"); only the latter has a corrections count,
because a fresh page has no baseline to count corrections against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import BadOrderingError, SchemaViolationError, ShapeError
from ..model.serialize import _Walker, canonical_json_bytes
from ..model.types import ParsedPage

ANNOTATION_FORMAT = "annotation-record.v1"
SOURCES = ("fresh", "corrected-from-prediction")
WINDOW_PAGES = 10


@dataclass(frozen=True)
class AnnotationRecord:
    doc_id: str
    page_number: int
    labels: dict[int, str]  # cell id -> label
    annotator: str
    started: float
    submitted: float
    source: str = "fresh"
    corrections_count: int | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise SchemaViolationError(
                f"$.source: expected one of {SOURCES}, got {self.source!r}"
            )
        if self.source == "fresh" and self.corrections_count is not None:
            raise SchemaViolationError(
                "$.corrections_count: fresh annotations have no prediction baseline"
            )
        if self.source == "corrected-from-prediction":
            if self.corrections_count is None or self.corrections_count < 0:
                raise SchemaViolationError(
                    "$.corrections_count: required and non-negative for corrected annotations"
                )
        if self.page_number < 1:
            raise SchemaViolationError(f"$.page_number: {self.page_number} is not a page")
        if self.submitted < self.started:
            raise SchemaViolationError("$.submitted: precedes started timestamp")

    @property
    def minutes(self) -> float:
        return (self.submitted - self.started) / 60.0

    def to_dict(self) -> dict:
        return {
            "format": ANNOTATION_FORMAT,
            "schema_version": 1,
            "doc_id": self.doc_id,
            "page_number": self.page_number,
            "labels": {str(k): v for k, v in sorted(self.labels.items())},
            "annotator": self.annotator,
            "started": self.started,
            "submitted": self.submitted,
            "source": self.source,
            "corrections_count": self.corrections_count,
        }

    def to_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_dict())


def annotation_from_dict(raw: dict, path: str = "$") -> AnnotationRecord:
    if not isinstance(raw, dict):
        _Walker.fail(path, "expected an object")
    if raw.get("format") != ANNOTATION_FORMAT:
        _Walker.fail(f"{path}.format", f"expected {ANNOTATION_FORMAT!r}, got {raw.get('format')!r}")
    if raw.get("schema_version") != 1:
        _Walker.fail(f"{path}.schema_version", f"unsupported version {raw.get('schema_version')!r}")
    labels_raw = _Walker.get(raw, "labels", dict, path)
    labels: dict[int, str] = {}
    for key, value in labels_raw.items():
        try:
            cell_id = int(key)
        except ValueError:
            _Walker.fail(f"{path}.labels", f"cell id {key!r} is not an integer")
        if not isinstance(value, str):
            _Walker.fail(f"{path}.labels[{key}]", "expected a string label")
        labels[cell_id] = value
    count = raw.get("corrections_count")
    if count is not None and (isinstance(count, bool) or not isinstance(count, int)):
        _Walker.fail(f"{path}.corrections_count", "expected an integer or null")
    return AnnotationRecord(
        doc_id=_Walker.get(raw, "doc_id", str, path),
        page_number=_Walker.get(raw, "page_number", int, path),
        labels=labels,
        annotator=_Walker.get(raw, "annotator", str, path),
        started=_Walker.get(raw, "started", float, path),
        submitted=_Walker.get(raw, "submitted", float, path),
        source=_Walker.get(raw, "source", str, path),
        corrections_count=count,
    )


def annotation_from_bytes(data: bytes) -> AnnotationRecord:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"$: not valid JSON: {exc}") from exc
    return annotation_from_dict(raw)


def coverage_violations(record: AnnotationRecord, page: ParsedPage) -> list[str]:
    """Every cell must carry a label; extras and unknowns are violations."""
    cell_ids = {c.id for c in page.cells}
    problems = []
    for cell_id in sorted(cell_ids - set(record.labels)):
        problems.append(f"cell {cell_id} has no label")
    for cell_id in sorted(set(record.labels) - cell_ids):
        problems.append(f"cell {cell_id} does not exist on page {record.page_number}")
    return problems


def diff_corrections(pre_annotation: Mapping[int, str], submitted: Mapping[int, str]) -> int:
    """Count cells whose submitted label differs from the pre-annotation."""
    if set(pre_annotation) != set(submitted):
        missing = sorted(set(pre_annotation) ^ set(submitted))
        raise ShapeError(f"cell ids differ between labelings: {missing[:5]}")
    return sum(1 for cell_id, label in submitted.items() if pre_annotation[cell_id] != label)


# ------------------------------------------------------------------ stats


@dataclass(frozen=True)
class SessionStats:
    """Pages-per-minute over sliding windows, plus retrain markers."""

    rates: tuple[float, ...]
    window_ends: tuple[float, ...]  # submit time of each window's last page
    retrain_markers: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if any(r < 0 for r in self.rates):
            raise SchemaViolationError("$.rates: negative annotation rate")

    def to_dict(self) -> dict:
        return {
            "windows": [
                {"end": end, "pages_per_minute": rate}
                for end, rate in zip(self.window_ends, self.rates)
            ],
            "retrain_markers": list(self.retrain_markers),
        }


def compute_session_stats(
    records: Sequence[AnnotationRecord],
    retrains: Sequence[float] = (),
    window_pages: int = WINDOW_PAGES,
) -> SessionStats:
    """Sliding-window annotation rate from per-page working time.

    Windows cover ``window_pages`` consecutive records (fewer only when
    the whole session is shorter); the rate divides pages by the summed
    per-page durations, so idle gaps between pages do not dilute it.
    """
    for earlier, later in zip(records, records[1:]):
        if later.submitted < earlier.submitted:
            raise BadOrderingError(
                f"records out of order: {later.submitted} after {earlier.submitted}"
            )
    if not records:
        return SessionStats((), (), tuple(retrains))
    size = min(window_pages, len(records))
    rates = []
    ends = []
    for start in range(len(records) - size + 1):
        window = records[start : start + size]
        minutes = sum(r.minutes for r in window)
        rates.append(len(window) / minutes if minutes > 0 else 0.0)
        ends.append(window[-1].submitted)
    return SessionStats(tuple(rates), tuple(ends), tuple(retrains))
