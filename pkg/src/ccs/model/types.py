"""Shared document data model.

All geometry is expressed in PDF points with the origin at the bottom-left
corner of the page (y grows upward). Coordinates are quantized to 3 decimal
places at construction so that canonical serialization round-trips exactly.

Types are immutable containers; they do not enforce cross-field invariants
at construction (``ccs.model.validate`` reports violations instead), which
keeps malformed fixtures constructible for validation tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

SCHEMA_VERSION = 1

PARSED_DOCUMENT_FORMAT = "parsed-document.v1"
STRUCTURED_DOCUMENT_FORMAT = "structured-document.v1"


def quantize(value: float) -> float:
    """Round to the canonical 3-decimal grid (1/1000 pt)."""
    if isinstance(value, float) and not math.isfinite(value):
        return value
    return round(float(value), 3)


@dataclass(frozen=True, slots=True)
class BBox:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        for name in ("x0", "y0", "x1", "y1"):
            object.__setattr__(self, name, quantize(getattr(self, name)))

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return max(0.0, self.width) * max(0.0, self.height)

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def intersection_area(self, other: "BBox") -> float:
        w = min(self.x1, other.x1) - max(self.x0, other.x0)
        h = min(self.y1, other.y1) - max(self.y0, other.y0)
        if w <= 0 or h <= 0:
            return 0.0
        return w * h

    def union(self, other: "BBox") -> "BBox":
        return BBox(
            min(self.x0, other.x0),
            min(self.y0, other.y0),
            max(self.x1, other.x1),
            max(self.y1, other.y1),
        )

    def as_list(self) -> list[float]:
        return [self.x0, self.y0, self.x1, self.y1]


@dataclass(frozen=True, slots=True)
class CellStyle:
    italic: bool = False
    bold: bool = False
    font_size: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "font_size", quantize(self.font_size))


@dataclass(frozen=True, slots=True)
class TextCell:
    id: int
    bbox: BBox
    text: str
    style: CellStyle = CellStyle()
    label: str | None = None

    def with_label(self, label: str | None) -> "TextCell":
        return replace(self, label=label)


@dataclass(frozen=True, slots=True)
class PageGeometry:
    width: float
    height: float
    page_number: int

    def __post_init__(self):
        object.__setattr__(self, "width", quantize(self.width))
        object.__setattr__(self, "height", quantize(self.height))


Point = tuple[float, float]


@dataclass(frozen=True, slots=True)
class PathSegment:
    """A straight ruling-line segment."""

    p0: Point
    p1: Point

    def __post_init__(self):
        object.__setattr__(self, "p0", (quantize(self.p0[0]), quantize(self.p0[1])))
        object.__setattr__(self, "p1", (quantize(self.p1[0]), quantize(self.p1[1])))

    def is_vertical(self, tol: float = 0.1) -> bool:
        return abs(self.p1[0] - self.p0[0]) <= tol

    def y_extent(self) -> tuple[float, float]:
        return (min(self.p0[1], self.p1[1]), max(self.p0[1], self.p1[1]))

    @property
    def x(self) -> float:
        return (self.p0[0] + self.p1[0]) / 2.0


@dataclass(frozen=True, slots=True)
class ParsedPage:
    geometry: PageGeometry
    cells: tuple[TextCell, ...] = ()
    paths: tuple[PathSegment, ...] = ()
    image_refs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "paths", tuple(self.paths))
        object.__setattr__(self, "image_refs", tuple(self.image_refs))


@dataclass(frozen=True, slots=True)
class ParsedDocument:
    doc_id: str
    source_name: str
    pages: tuple[ParsedPage, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "pages", tuple(self.pages))

    def page(self, page_number: int) -> ParsedPage:
        for p in self.pages:
            if p.geometry.page_number == page_number:
                return p
        raise KeyError(page_number)


@dataclass(frozen=True, slots=True)
class Label:
    name: str
    color: str  # RGB hex, "#rrggbb"


@dataclass(frozen=True, slots=True)
class LabelSet:
    labels: tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))

    def names(self) -> list[str]:
        return [l.name for l in self.labels]

    def index(self, name: str) -> int:
        for i, l in enumerate(self.labels):
            if l.name == name:
                return i
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(l.name == name for l in self.labels)

    def __len__(self) -> int:
        return len(self.labels)


# Six classifier labels plus caption/list used by annotation campaigns.
DEFAULT_LABELS = LabelSet(
    (
        Label("title", "#ff0000"),
        Label("author", "#00b050"),
        Label("subtitle", "#8b0000"),
        Label("text", "#ffd700"),
        Label("picture", "#fffff0"),
        Label("table", "#4682b4"),
        Label("caption", "#ffa500"),
        Label("list", "#800080"),
    )
)


@dataclass(frozen=True, slots=True)
class Provenance:
    bbox: BBox
    page: int


@dataclass(frozen=True, slots=True)
class DocumentObject:
    type: str
    text: str
    prov: tuple[Provenance, ...]

    def __post_init__(self):
        object.__setattr__(self, "prov", tuple(self.prov))


@dataclass(frozen=True, slots=True)
class TableObject:
    prov: tuple[Provenance, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "prov", tuple(self.prov))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))


@dataclass(frozen=True, slots=True)
class ImageObject:
    prov: tuple[Provenance, ...]

    def __post_init__(self):
        object.__setattr__(self, "prov", tuple(self.prov))


@dataclass(frozen=True, slots=True)
class Description:
    title: str = ""
    abstract: str = ""
    affiliations: str = ""
    authors: str = ""


@dataclass(frozen=True, slots=True)
class StructuredDocument:
    description: Description = Description()
    main_text: tuple[DocumentObject, ...] = ()
    tables: tuple[TableObject, ...] = ()
    images: tuple[ImageObject, ...] = ()
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "main_text", tuple(self.main_text))
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "images", tuple(self.images))
