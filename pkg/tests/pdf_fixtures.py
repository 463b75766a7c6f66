"""PDF fixture builders used across the test suite.

reportlab is a dev-only dependency; runtime code never imports it.
"""

from __future__ import annotations

import io

from reportlab.pdfgen import canvas


def _canvas(buf, **kwargs) -> canvas.Canvas:
    return canvas.Canvas(buf, pagesize=(612, 792), **kwargs)


def hello_pdf() -> bytes:
    buf = io.BytesIO()
    c = _canvas(buf)
    c.setFont("Helvetica", 12)
    c.drawString(72, 700, "Hello")
    c.showPage()
    c.save()
    return buf.getvalue()


def empty_page_pdf() -> bytes:
    buf = io.BytesIO()
    c = _canvas(buf)
    c.showPage()
    c.save()
    return buf.getvalue()


def table_pdf() -> bytes:
    """Two table cells separated by one vertical rule at x=300."""
    buf = io.BytesIO()
    c = _canvas(buf)
    c.setFont("Helvetica", 10)
    c.drawString(220, 500, "alpha")
    c.drawString(320, 500, "42.5")
    c.line(300, 490, 300, 512)
    c.showPage()
    c.save()
    return buf.getvalue()


def encrypted_pdf() -> bytes:
    buf = io.BytesIO()
    c = _canvas(buf, encrypt="secret")
    c.setFont("Helvetica", 12)
    c.drawString(72, 700, "locked")
    c.showPage()
    c.save()
    return buf.getvalue()


def image_only_pdf() -> bytes:
    from PIL import Image
    from reportlab.lib.utils import ImageReader

    img = Image.new("RGB", (16, 16), (40, 90, 200))
    buf = io.BytesIO()
    c = _canvas(buf)
    c.drawImage(ImageReader(img), 100, 400, width=300, height=200)
    c.showPage()
    c.save()
    return buf.getvalue()


def zero_page_pdf() -> bytes:
    """Structurally valid file whose page tree has no pages."""
    out = bytearray(b"%PDF-1.4\n")
    offsets = {}

    def add(num: int, body: bytes) -> None:
        offsets[num] = len(out)
        out.extend(f"{num} 0 obj\n".encode())
        out.extend(body)
        out.extend(b"\nendobj\n")

    add(1, b"<< /Type /Catalog /Pages 2 0 R >>")
    add(2, b"<< /Type /Pages /Kids [] /Count 0 >>")
    xref_at = len(out)
    out.extend(b"xref\n0 3\n0000000000 65535 f \n")
    for n in (1, 2):
        out.extend(f"{offsets[n]:010d} 00000 n \n".encode())
    out.extend(b"trailer\n<< /Size 3 /Root 1 0 R >>\nstartxref\n")
    out.extend(f"{xref_at}\n%%EOF\n".encode())
    return bytes(out)


def corrupt_xref_pdf() -> bytes:
    data = hello_pdf()
    at = data.rfind(b"startxref")
    end = data.index(b"%%EOF", at)
    return data[:at] + b"startxref\n99999999\n" + data[end:]


def multipage_pdf(n_pages: int = 3, lines_per_page: int = 5) -> bytes:
    buf = io.BytesIO()
    c = _canvas(buf)
    for p in range(n_pages):
        c.setFont("Helvetica", 10)
        for i in range(lines_per_page):
            c.drawString(72, 720 - 14 * i, f"page {p + 1} line {i + 1}")
        c.showPage()
    c.save()
    return buf.getvalue()
