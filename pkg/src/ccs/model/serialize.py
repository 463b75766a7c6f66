"""Canonical JSON serialization for the document model.

Canonical form is byte-stable: fixed key order, floats always printed with
exactly 3 decimal places, no insignificant whitespace variation. Two equal
in-memory documents serialize to identical bytes regardless of construction
order, and deserialize(serialize(d)) == d.

Deserializers validate shape as they walk the payload and raise
SchemaViolationError carrying the JSON path of the first failure.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import SchemaViolationError
from .types import (
    PARSED_DOCUMENT_FORMAT,
    STRUCTURED_DOCUMENT_FORMAT,
    BBox,
    CellStyle,
    Description,
    DocumentObject,
    ImageObject,
    Label,
    LabelSet,
    PageGeometry,
    ParsedDocument,
    ParsedPage,
    PathSegment,
    Provenance,
    StructuredDocument,
    TableObject,
    TextCell,
)
from .validate import validate


class _F(float):
    """Marker for values that must be printed as fixed 3-decimal floats."""


def _fmt(value: Any) -> str:
    if isinstance(value, _F):
        return f"{float(value):.3f}"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, float):
        # Non-geometry floats keep full precision via the shortest repr.
        return json.dumps(value)
    if isinstance(value, dict):
        items = (f"{json.dumps(k, ensure_ascii=False)}: {_fmt(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def canonical_json_bytes(payload: dict) -> bytes:
    return (_fmt(payload) + "\n").encode("utf-8")


def _bbox_list(b: BBox) -> list[_F]:
    return [_F(b.x0), _F(b.y0), _F(b.x1), _F(b.y1)]


# ---------------------------------------------------------------- encoding


def parsed_to_dict(doc: ParsedDocument) -> dict:
    return {
        "format": PARSED_DOCUMENT_FORMAT,
        "schema_version": doc.schema_version,
        "doc_id": doc.doc_id,
        "source_name": doc.source_name,
        "pages": [
            {
                "geometry": {
                    "page_number": p.geometry.page_number,
                    "width": _F(p.geometry.width),
                    "height": _F(p.geometry.height),
                },
                "cells": [
                    {
                        "id": c.id,
                        "bbox": _bbox_list(c.bbox),
                        "text": c.text,
                        "style": {
                            "italic": c.style.italic,
                            "bold": c.style.bold,
                            "font_size": _F(c.style.font_size),
                        },
                        "label": c.label,
                    }
                    for c in p.cells
                ],
                "paths": [
                    [[_F(s.p0[0]), _F(s.p0[1])], [_F(s.p1[0]), _F(s.p1[1])]]
                    for s in p.paths
                ],
                "image_refs": list(p.image_refs),
            }
            for p in doc.pages
        ],
    }


def structured_to_dict(doc: StructuredDocument) -> dict:
    def provs(entries):
        return [{"bbox": _bbox_list(p.bbox), "page": p.page} for p in entries]

    return {
        "format": STRUCTURED_DOCUMENT_FORMAT,
        "schema_version": doc.schema_version,
        "description": {
            "title": doc.description.title,
            "abstract": doc.description.abstract,
            "affiliations": doc.description.affiliations,
            "authors": doc.description.authors,
        },
        "main-text": [
            {"prov": provs(o.prov), "type": o.type, "text": o.text}
            for o in doc.main_text
        ],
        "tables": [
            {"prov": provs(t.prov), "rows": [list(r) for r in t.rows]}
            for t in doc.tables
        ],
        "images": [{"prov": provs(i.prov)} for i in doc.images],
    }


def serialize(doc: ParsedDocument | StructuredDocument) -> bytes:
    """Canonical bytes for a valid document; raises ValueError when invalid."""
    violations = validate(doc)
    if violations:
        raise ValueError(f"document invalid: {violations[0]}")
    if isinstance(doc, StructuredDocument):
        return canonical_json_bytes(structured_to_dict(doc))
    return canonical_json_bytes(parsed_to_dict(doc))


# -------------------------------------------------------------- decoding


class _Walker:
    """Shape-checked reader that tracks the JSON path for error reporting."""

    @staticmethod
    def fail(path: str, message: str):
        raise SchemaViolationError(message, path=path)

    @classmethod
    def get(cls, obj: dict, key: str, kind, path: str, optional: bool = False):
        if not isinstance(obj, dict):
            cls.fail(path, "expected object")
        if key not in obj:
            if optional:
                return None
            cls.fail(path, f"missing key {key!r}")
        value = obj[key]
        here = f"{path}.{key}"
        if kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                cls.fail(here, "expected number")
            return float(value)
        if kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                cls.fail(here, "expected integer")
            return value
        if kind is not None and not isinstance(value, kind):
            cls.fail(here, f"expected {kind.__name__}")
        return value


def _parse_bbox(raw, path: str) -> BBox:
    if not isinstance(raw, list) or len(raw) != 4:
        _Walker.fail(path, "expected bbox array of length 4")
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            _Walker.fail(f"{path}[{i}]", "expected number")
    return BBox(*[float(v) for v in raw])


def _check_format(payload, expected: str, path: str = "$"):
    if not isinstance(payload, dict):
        _Walker.fail(path, "expected top-level object")
    fmt = _Walker.get(payload, "format", str, path)
    if fmt != expected:
        _Walker.fail(f"{path}.format", f"expected {expected!r}, got {fmt!r}")
    version = _Walker.get(payload, "schema_version", int, path)
    if version != 1:
        _Walker.fail(f"{path}.schema_version", f"unsupported schema version {version}")


def parsed_from_dict(payload: dict) -> ParsedDocument:
    w = _Walker
    _check_format(payload, PARSED_DOCUMENT_FORMAT)
    pages_raw = w.get(payload, "pages", list, "$")
    pages = []
    for pi, page_raw in enumerate(pages_raw):
        p = f"$.pages[{pi}]"
        geom_raw = w.get(page_raw, "geometry", dict, p)
        geometry = PageGeometry(
            width=w.get(geom_raw, "width", float, f"{p}.geometry"),
            height=w.get(geom_raw, "height", float, f"{p}.geometry"),
            page_number=w.get(geom_raw, "page_number", int, f"{p}.geometry"),
        )
        cells = []
        for ci, cell_raw in enumerate(w.get(page_raw, "cells", list, p)):
            cp = f"{p}.cells[{ci}]"
            style_raw = w.get(cell_raw, "style", dict, cp)
            label = w.get(cell_raw, "label", None, cp)
            if label is not None and not isinstance(label, str):
                w.fail(f"{cp}.label", "expected string or null")
            cells.append(
                TextCell(
                    id=w.get(cell_raw, "id", int, cp),
                    bbox=_parse_bbox(w.get(cell_raw, "bbox", list, cp), f"{cp}.bbox"),
                    text=w.get(cell_raw, "text", str, cp),
                    style=CellStyle(
                        italic=w.get(style_raw, "italic", bool, f"{cp}.style"),
                        bold=w.get(style_raw, "bold", bool, f"{cp}.style"),
                        font_size=w.get(style_raw, "font_size", float, f"{cp}.style"),
                    ),
                    label=label,
                )
            )
        paths = []
        for si, seg_raw in enumerate(w.get(page_raw, "paths", list, p)):
            sp = f"{p}.paths[{si}]"
            if (
                not isinstance(seg_raw, list)
                or len(seg_raw) != 2
                or any(not isinstance(pt, list) or len(pt) != 2 for pt in seg_raw)
            ):
                w.fail(sp, "expected [[x0, y0], [x1, y1]]")
            (x0, y0), (x1, y1) = seg_raw
            paths.append(PathSegment((float(x0), float(y0)), (float(x1), float(y1))))
        image_refs = w.get(page_raw, "image_refs", list, p)
        for ri, ref in enumerate(image_refs):
            if not isinstance(ref, str):
                w.fail(f"{p}.image_refs[{ri}]", "expected string")
        pages.append(ParsedPage(geometry, tuple(cells), tuple(paths), tuple(image_refs)))
    return ParsedDocument(
        doc_id=w.get(payload, "doc_id", str, "$"),
        source_name=w.get(payload, "source_name", str, "$"),
        pages=tuple(pages),
        schema_version=w.get(payload, "schema_version", int, "$"),
    )


def _parse_provs(raw, path: str) -> tuple[Provenance, ...]:
    if not isinstance(raw, list):
        _Walker.fail(path, "expected array")
    out = []
    for i, entry in enumerate(raw):
        p = f"{path}[{i}]"
        bbox = _parse_bbox(_Walker.get(entry, "bbox", list, p), f"{p}.bbox")
        out.append(Provenance(bbox=bbox, page=_Walker.get(entry, "page", int, p)))
    return tuple(out)


def structured_from_dict(payload: dict) -> StructuredDocument:
    w = _Walker
    _check_format(payload, STRUCTURED_DOCUMENT_FORMAT)
    desc_raw = w.get(payload, "description", dict, "$")
    description = Description(
        title=w.get(desc_raw, "title", str, "$.description"),
        abstract=w.get(desc_raw, "abstract", str, "$.description"),
        affiliations=w.get(desc_raw, "affiliations", str, "$.description"),
        authors=w.get(desc_raw, "authors", str, "$.description"),
    )
    main_text = []
    for i, obj_raw in enumerate(w.get(payload, "main-text", list, "$")):
        p = f"$.main-text[{i}]"
        main_text.append(
            DocumentObject(
                type=w.get(obj_raw, "type", str, p),
                text=w.get(obj_raw, "text", str, p),
                prov=_parse_provs(w.get(obj_raw, "prov", list, p), f"{p}.prov"),
            )
        )
    tables = []
    for i, tab_raw in enumerate(w.get(payload, "tables", list, "$")):
        p = f"$.tables[{i}]"
        rows_raw = w.get(tab_raw, "rows", list, p)
        rows = []
        for ri, row in enumerate(rows_raw):
            if not isinstance(row, list) or any(not isinstance(t, str) for t in row):
                w.fail(f"{p}.rows[{ri}]", "expected array of strings")
            rows.append(tuple(row))
        tables.append(
            TableObject(prov=_parse_provs(w.get(tab_raw, "prov", list, p), f"{p}.prov"), rows=tuple(rows))
        )
    images = []
    for i, img_raw in enumerate(w.get(payload, "images", list, "$")):
        p = f"$.images[{i}]"
        images.append(ImageObject(prov=_parse_provs(w.get(img_raw, "prov", list, p), f"{p}.prov")))
    return StructuredDocument(
        description=description,
        main_text=tuple(main_text),
        tables=tuple(tables),
        images=tuple(images),
        schema_version=w.get(payload, "schema_version", int, "$"),
    )


def deserialize(data: bytes) -> ParsedDocument | StructuredDocument:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolationError(f"not valid JSON: {exc}", path="$") from None
    if not isinstance(payload, dict):
        raise SchemaViolationError("expected top-level object", path="$")
    fmt = payload.get("format")
    if fmt == PARSED_DOCUMENT_FORMAT:
        return parsed_from_dict(payload)
    if fmt == STRUCTURED_DOCUMENT_FORMAT:
        return structured_from_dict(payload)
    raise SchemaViolationError(f"unknown format {fmt!r}", path="$.format")


# ------------------------------------------------------------ label sets


def label_set_to_list(label_set: LabelSet) -> list[dict]:
    return [{"name": l.name, "color": l.color} for l in label_set.labels]


def label_set_from_list(raw, path: str = "$.label_set") -> LabelSet:
    if not isinstance(raw, list) or not raw:
        _Walker.fail(path, "expected non-empty array")
    labels = []
    seen = set()
    for i, entry in enumerate(raw):
        p = f"{path}[{i}]"
        name = _Walker.get(entry, "name", str, p)
        color = _Walker.get(entry, "color", str, p)
        if name in seen:
            _Walker.fail(p, f"duplicate label name {name!r}")
        seen.add(name)
        labels.append(Label(name, color))
    return LabelSet(tuple(labels))
