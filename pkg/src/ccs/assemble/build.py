"""Labeled cells to the structured output document."""

from __future__ import annotations

import statistics

from ..errors import ShapeError
from ..model import (
    BBox,
    Description,
    DocumentObject,
    ImageObject,
    ParsedDocument,
    ParsedPage,
    Provenance,
    StructuredDocument,
    TableObject,
)
from .merge import PageCell, contract_run, join_texts, label_runs
from .order import reading_order

# Output type names per label; unlisted labels pass through unchanged.
DEFAULT_TYPE_NAMES = {
    "subtitle": "subtitle-level-1",
    "text": "paragraph",
}

_DESCRIPTION_LABELS = ("title", "author", "affiliation", "abstract")


def _ordered_cells(doc: ParsedDocument, page_labels: dict[int, list[str]] | None) -> list[PageCell]:
    ordered: list[PageCell] = []
    for page in doc.pages:
        n = page.geometry.page_number
        cells = page.cells
        if page_labels is not None:
            labels = page_labels.get(n)
            if labels is None or len(labels) != len(cells):
                got = 0 if labels is None else len(labels)
                raise ShapeError(f"page {n}: {got} labels for {len(cells)} cells")
            cells = tuple(c.with_label(labels[c.id]) for c in cells)
        by_id = {c.id: c for c in cells}
        order = reading_order(ParsedPage(geometry=page.geometry, cells=cells))
        ordered.extend((n, by_id[i]) for i in order)
    return ordered


def _table_rows(cells: list[PageCell]) -> tuple[tuple[str, ...], ...]:
    """Grid of texts: rows by baseline clusters, columns by left edges."""
    if not cells:
        return ()
    tol = max(1.0, 0.6 * statistics.median(c.bbox.height for _, c in cells))
    entries = sorted(
        ((c.bbox.center[1], c.bbox.x0, c.text) for _, c in cells),
        key=lambda e: (-e[0], e[1]),
    )
    rows: list[list[tuple[float, str]]] = []
    anchor = 0.0
    for y, x, text in entries:
        if rows and abs(anchor - y) <= tol:
            rows[-1].append((x, text))
        else:
            rows.append([(x, text)])
            anchor = y

    col_starts: list[float] = []
    for x in sorted(x for row in rows for x, _ in row):
        if not col_starts or x - col_starts[-1] > tol:
            col_starts.append(x)

    def col_of(x: float) -> int:
        return min(range(len(col_starts)), key=lambda i: abs(col_starts[i] - x))

    grid = []
    for row in rows:
        slots = [""] * len(col_starts)
        for x, text in row:
            i = col_of(x)
            slots[i] = text if not slots[i] else slots[i] + " " + text
        grid.append(tuple(slots))
    return tuple(grid)


def assemble(
    doc: ParsedDocument,
    page_labels: dict[int, list[str]] | None = None,
    type_names: dict[str, str] | None = None,
) -> StructuredDocument:
    """Build the structured document; pure and fully deterministic.

    Cells must carry labels, either on the ParsedDocument itself or via
    ``page_labels`` (page number to per-cell label list, aligned with
    cell ids).
    """
    names = DEFAULT_TYPE_NAMES if type_names is None else type_names
    ordered = _ordered_cells(doc, page_labels)
    runs = label_runs(ordered)

    desc = {k: "" for k in _DESCRIPTION_LABELS}
    desc_lists: dict[str, list[str]] = {"author": [], "affiliation": []}
    main_text: list[DocumentObject] = []
    tables: list[TableObject] = []
    page_pictures: dict[int, list[ImageObject]] = {}

    for label, cells in runs:
        first_page = cells[0][0]
        if label == "table":
            obj = contract_run(label, cells)
            tables.append(TableObject(prov=obj.prov, rows=_table_rows(cells)))
            continue
        if label == "picture":
            prov = tuple(Provenance(bbox=c.bbox, page=page) for page, c in cells)
            page_pictures.setdefault(first_page, []).append(ImageObject(prov=prov))
            continue
        if label in _DESCRIPTION_LABELS and first_page == 1:
            if label in desc_lists:
                desc_lists[label].append(join_texts([c.text for _, c in cells]))
                continue
            if not desc[label]:
                desc[label] = join_texts([c.text for _, c in cells])
                continue
        obj = contract_run(label, cells)
        main_text.append(DocumentObject(type=names.get(label, label), text=obj.text, prov=obj.prov))

    images: list[ImageObject] = []
    for page in doc.pages:
        n = page.geometry.page_number
        images.extend(page_pictures.get(n, ()))
        full_page = BBox(0.0, 0.0, page.geometry.width, page.geometry.height)
        images.extend(
            ImageObject(prov=(Provenance(bbox=full_page, page=n),)) for _ in page.image_refs
        )

    return StructuredDocument(
        description=Description(
            title=desc["title"],
            abstract=desc["abstract"],
            affiliations="; ".join(desc_lists["affiliation"]),
            authors="; ".join(desc_lists["author"]),
        ),
        main_text=tuple(main_text),
        tables=tuple(tables),
        images=tuple(images),
    )
