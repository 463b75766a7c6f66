"""Raw extraction artifacts and the replayable fixture format.

A RawSnippet is what the extraction backend hands to normalization: one
text run with its box, font and baseline. The raw-snippets.v1 JSON format
records extractions so normalization tests can replay them without a PDF
engine in the loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import SchemaViolationError
from ..model import BBox, PageGeometry, PathSegment
from ..model.serialize import _Walker, _parse_bbox, canonical_json_bytes, _F

RAW_SNIPPETS_FORMAT = "raw-snippets.v1"


@dataclass(frozen=True)
class FontInfo:
    name: str = "Helvetica"
    size: float = 10.0
    italic: bool = False
    bold: bool = False


@dataclass(frozen=True)
class RawSnippet:
    bbox: BBox
    text: str
    font: FontInfo = FontInfo()
    baseline_y: float = 0.0


@dataclass(frozen=True)
class PageExtract:
    geometry: PageGeometry
    snippets: tuple[RawSnippet, ...] = ()
    paths: tuple[PathSegment, ...] = ()
    image_refs: tuple[str, ...] = ()


def pages_to_raw_dict(pages: list[PageExtract], source_name: str = "") -> dict:
    return {
        "format": RAW_SNIPPETS_FORMAT,
        "schema_version": 1,
        "source_name": source_name,
        "pages": [
            {
                "geometry": {
                    "page_number": p.geometry.page_number,
                    "width": _F(p.geometry.width),
                    "height": _F(p.geometry.height),
                },
                "snippets": [
                    {
                        "bbox": [_F(s.bbox.x0), _F(s.bbox.y0), _F(s.bbox.x1), _F(s.bbox.y1)],
                        "text": s.text,
                        "font": {
                            "name": s.font.name,
                            "size": _F(s.font.size),
                            "italic": s.font.italic,
                            "bold": s.font.bold,
                        },
                        "baseline_y": _F(s.baseline_y),
                    }
                    for s in p.snippets
                ],
                "paths": [
                    [[_F(seg.p0[0]), _F(seg.p0[1])], [_F(seg.p1[0]), _F(seg.p1[1])]]
                    for seg in p.paths
                ],
                "image_refs": list(p.image_refs),
            }
            for p in pages
        ],
    }


def raw_snippets_to_bytes(pages: list[PageExtract], source_name: str = "") -> bytes:
    return canonical_json_bytes(pages_to_raw_dict(pages, source_name))


def raw_snippets_from_bytes(data: bytes) -> tuple[list[PageExtract], str]:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolationError(f"not valid JSON: {exc}", path="$") from None
    w = _Walker
    if not isinstance(payload, dict) or payload.get("format") != RAW_SNIPPETS_FORMAT:
        raise SchemaViolationError(f"expected {RAW_SNIPPETS_FORMAT}", path="$.format")
    if payload.get("schema_version") != 1:
        raise SchemaViolationError("unsupported schema version", path="$.schema_version")
    pages = []
    for pi, page_raw in enumerate(w.get(payload, "pages", list, "$")):
        p = f"$.pages[{pi}]"
        geom_raw = w.get(page_raw, "geometry", dict, p)
        geometry = PageGeometry(
            width=w.get(geom_raw, "width", float, f"{p}.geometry"),
            height=w.get(geom_raw, "height", float, f"{p}.geometry"),
            page_number=w.get(geom_raw, "page_number", int, f"{p}.geometry"),
        )
        snippets = []
        for si, raw in enumerate(w.get(page_raw, "snippets", list, p)):
            sp = f"{p}.snippets[{si}]"
            font_raw = w.get(raw, "font", dict, sp)
            snippets.append(
                RawSnippet(
                    bbox=_parse_bbox(w.get(raw, "bbox", list, sp), f"{sp}.bbox"),
                    text=w.get(raw, "text", str, sp),
                    font=FontInfo(
                        name=w.get(font_raw, "name", str, f"{sp}.font"),
                        size=w.get(font_raw, "size", float, f"{sp}.font"),
                        italic=w.get(font_raw, "italic", bool, f"{sp}.font"),
                        bold=w.get(font_raw, "bold", bool, f"{sp}.font"),
                    ),
                    baseline_y=w.get(raw, "baseline_y", float, sp),
                )
            )
        paths = []
        for seg_raw in w.get(page_raw, "paths", list, p):
            (x0, y0), (x1, y1) = seg_raw
            paths.append(PathSegment((float(x0), float(y0)), (float(x1), float(y1))))
        image_refs = tuple(w.get(page_raw, "image_refs", list, p))
        pages.append(PageExtract(geometry, tuple(snippets), tuple(paths), image_refs))
    return pages, w.get(payload, "source_name", str, "$")
