"""Extraction backends behind parseDocument.

The production backend reads PDF bytes. The fixture backend replays a
recorded raw-snippets.v1 extraction, which keeps normalization and
everything downstream testable without a PDF engine in the loop.
"""

from __future__ import annotations

from typing import Protocol

from .pdf import extract_pages
from .snippets import PageExtract, raw_snippets_from_bytes


class ExtractionBackend(Protocol):
    def extract(self, data: bytes) -> list[PageExtract]: ...


class PdfBackend:
    def extract(self, data: bytes) -> list[PageExtract]:
        return extract_pages(data)


class FixtureBackend:
    """Replays a canned extraction no matter what bytes arrive."""

    def __init__(self, pages: list[PageExtract]):
        self.pages = list(pages)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "FixtureBackend":
        pages, _ = raw_snippets_from_bytes(raw)
        return cls(pages)

    def extract(self, data: bytes) -> list[PageExtract]:
        return list(self.pages)
