"""Top-level document parsing: bytes in, validated ParsedDocument out."""

from __future__ import annotations

import hashlib

from ..errors import SchemaViolationError
from ..model import ParsedDocument, ParsedPage, validate
from .backend import ExtractionBackend, PdfBackend
from .normalize import NormalizationConfig, NormalizationReport, normalize_cells

_DEFAULT_BACKEND = PdfBackend()


def parse_document(
    data: bytes,
    config: NormalizationConfig | None = None,
    source_name: str = "",
    backend: ExtractionBackend | None = None,
) -> ParsedDocument:
    doc, _ = parse_document_with_reports(data, config, source_name, backend)
    return doc


def parse_document_with_reports(
    data: bytes,
    config: NormalizationConfig | None = None,
    source_name: str = "",
    backend: ExtractionBackend | None = None,
) -> tuple[ParsedDocument, list[NormalizationReport]]:
    backend = backend or _DEFAULT_BACKEND
    extracts = backend.extract(data)
    pages = []
    reports = []
    for ex in extracts:
        cells, report = normalize_cells(list(ex.snippets), list(ex.paths), ex.geometry, config)
        pages.append(
            ParsedPage(
                geometry=ex.geometry,
                cells=tuple(cells),
                paths=ex.paths,
                image_refs=ex.image_refs,
            )
        )
        reports.append(report)
    doc = ParsedDocument(
        doc_id=hashlib.sha256(data).hexdigest(),
        source_name=source_name,
        pages=tuple(pages),
    )
    violations = validate(doc)
    if violations:
        raise SchemaViolationError(violations[0])
    return doc, reports
