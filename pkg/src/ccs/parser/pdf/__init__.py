"""Minimal PDF reader for digitally-born documents.

Supports classic cross-reference tables, FlateDecode streams and the
fourteen standard fonts. Encrypted files, xref streams, object streams
and filter predictors are rejected with typed errors rather than
misread.
"""

from .document import PdfDocument
from .extract import extract_pages

__all__ = ["PdfDocument", "extract_pages"]
