"""PDF bytes to per-page raw extractions."""

from __future__ import annotations

from ...errors import ParseFailureError
from ...model import PageGeometry
from ..snippets import PageExtract
from .content import ContentInterpreter, _translation
from .document import PdfDocument
from .objects import Ref


def _media_box(doc: PdfDocument, page: dict) -> tuple[float, float, float, float]:
    raw = doc.resolve(page.get("MediaBox"))
    if not isinstance(raw, list) or len(raw) != 4:
        return (0.0, 0.0, 612.0, 792.0)
    vals = []
    for v in raw:
        v = doc.resolve(v)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            return (0.0, 0.0, 612.0, 792.0)
        vals.append(float(v))
    llx = min(vals[0], vals[2])
    lly = min(vals[1], vals[3])
    urx = max(vals[0], vals[2])
    ury = max(vals[1], vals[3])
    return (llx, lly, urx, ury)


def _page_content(doc: PdfDocument, page: dict) -> bytes:
    contents = page.get("Contents")
    if contents is None:
        return b""
    resolved = doc.resolve(contents)
    if isinstance(resolved, list):
        parts = []
        for item in resolved:
            if isinstance(item, Ref):
                parts.append(doc.stream_bytes(item))
        return b"\n".join(parts)
    if isinstance(contents, Ref):
        return doc.stream_bytes(contents)
    return b""


def extract_pages(data: bytes) -> list[PageExtract]:
    """Parse PDF bytes into raw snippets, paths and image refs per page."""
    doc = PdfDocument(data)
    pages = doc.pages()
    if not pages:
        raise ParseFailureError("document has no pages", offset=0)
    out: list[PageExtract] = []
    for i, page in enumerate(pages):
        llx, lly, urx, ury = _media_box(doc, page)
        interp = ContentInterpreter(
            doc,
            doc.resolve(page.get("Resources")) or {},
            base_ctm=_translation(-llx, -lly),
        )
        interp.run(_page_content(doc, page))
        out.append(
            PageExtract(
                geometry=PageGeometry(width=urx - llx, height=ury - lly, page_number=i + 1),
                snippets=tuple(interp.snippets),
                paths=tuple(interp.segments),
                image_refs=tuple(interp.image_refs),
            )
        )
    return out
