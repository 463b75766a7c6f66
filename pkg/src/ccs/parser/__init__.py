"""PDF parsing: extraction backends plus cell normalization."""

from .backend import ExtractionBackend, FixtureBackend, PdfBackend
from .normalize import (
    DEFAULT_LIST_MARKERS,
    NormalizationConfig,
    NormalizationReport,
    normalize_cells,
)
from .parse import parse_document, parse_document_with_reports
from .snippets import (
    RAW_SNIPPETS_FORMAT,
    FontInfo,
    PageExtract,
    RawSnippet,
    raw_snippets_from_bytes,
    raw_snippets_to_bytes,
)

__all__ = [
    "DEFAULT_LIST_MARKERS",
    "ExtractionBackend",
    "FixtureBackend",
    "FontInfo",
    "NormalizationConfig",
    "NormalizationReport",
    "PageExtract",
    "PdfBackend",
    "RAW_SNIPPETS_FORMAT",
    "RawSnippet",
    "normalize_cells",
    "parse_document",
    "parse_document_with_reports",
    "raw_snippets_from_bytes",
    "raw_snippets_to_bytes",
]
