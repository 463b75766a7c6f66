"""Invariant checks over parsed and structured documents.

Validation never raises; it returns a list of human-readable violations,
each naming the page, cell, and rule broken.
"""

from __future__ import annotations

import math

from .types import LabelSet, ParsedDocument, StructuredDocument

# Cells may overhang the page rectangle by this much before it is an error.
PAGE_OVERHANG_TOL = 2.0


def _finite(*values) -> bool:
    return all(isinstance(v, (int, float)) and math.isfinite(v) for v in values)


def validate(
    doc: ParsedDocument | StructuredDocument,
    label_set: LabelSet | None = None,
) -> list[str]:
    if isinstance(doc, StructuredDocument):
        return _validate_structured(doc)
    return _validate_parsed(doc, label_set)


def _validate_parsed(doc: ParsedDocument, label_set: LabelSet | None) -> list[str]:
    violations: list[str] = []
    if doc.schema_version != 1:
        violations.append(f"document: unsupported schema_version {doc.schema_version}")
    if not doc.doc_id:
        violations.append("document: empty doc_id")

    expected = 1
    for page in doc.pages:
        n = page.geometry.page_number
        if n != expected:
            violations.append(f"page {n}: page gap (expected page_number {expected})")
            expected = n + 1
        else:
            expected += 1
        if not (page.geometry.width > 0 and page.geometry.height > 0):
            violations.append(f"page {n}: non-positive page geometry")
            continue

        seen_ids = set()
        for i, cell in enumerate(page.cells):
            where = f"page {n} cell {cell.id}"
            if cell.id != i:
                if cell.id in seen_ids:
                    violations.append(f"{where}: duplicate cell id")
                else:
                    violations.append(f"{where}: ids not dense (expected {i})")
            seen_ids.add(cell.id)

            b = cell.bbox
            if not _finite(b.x0, b.y0, b.x1, b.y1):
                violations.append(f"{where}: non-finite bbox coordinate")
                continue
            if not (b.x0 < b.x1):
                violations.append(f"{where}: inverted bbox (x0 >= x1)")
            if not (b.y0 < b.y1):
                violations.append(f"{where}: inverted bbox (y0 >= y1)")
            if "\n" in cell.text or "\r" in cell.text:
                violations.append(f"{where}: text contains a line break")
            if not _bbox_on_page(b, page.geometry.width, page.geometry.height):
                violations.append(f"{where}: bbox outside page rectangle")
            if cell.label is not None and label_set is not None and cell.label not in label_set:
                violations.append(f"{where}: label {cell.label!r} not in label set")
    return violations


def _bbox_on_page(b, width, height) -> bool:
    t = PAGE_OVERHANG_TOL
    return b.x0 >= -t and b.x1 <= width + t and b.y0 >= -t and b.y1 <= height + t


def _validate_structured(doc: StructuredDocument) -> list[str]:
    violations: list[str] = []
    if doc.schema_version != 1:
        violations.append(f"document: unsupported schema_version {doc.schema_version}")

    def check_provs(kind: str, idx: int, provs) -> None:
        if not provs:
            violations.append(f"{kind} {idx}: no provenance records")
        for p in provs:
            b = p.bbox
            if not _finite(b.x0, b.y0, b.x1, b.y1) or not (b.x0 < b.x1 and b.y0 < b.y1):
                violations.append(f"{kind} {idx}: malformed provenance bbox")
            if p.page < 1:
                violations.append(f"{kind} {idx}: provenance page {p.page} < 1")

    for i, obj in enumerate(doc.main_text):
        check_provs("main-text object", i, obj.prov)
    for i, tab in enumerate(doc.tables):
        check_provs("table", i, tab.prov)
    for i, img in enumerate(doc.images):
        check_provs("image", i, img.prov)
    return violations
