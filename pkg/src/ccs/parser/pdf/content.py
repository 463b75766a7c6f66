"""Content-stream interpreter.

Walks a page's operator stream and produces raw text snippets, committed
path segments and image references. Exactly one snippet is emitted per
text-showing instruction; positioning adjustments inside a TJ array that
open a gap wider than 0.3 em are rendered into the snippet text as an
equivalent run of spaces so downstream gap-based splitting still sees
them. Curves are flattened to their chords, which is enough for the
ruling-line detection this feeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ...model import BBox, PathSegment
from ..snippets import FontInfo, RawSnippet
from .document import PdfDocument
from .fonts import DEFAULT_FONT, ResolvedFont, resolve_base_font
from .objects import DELIMITERS, Lexer, Name, WHITESPACE

Matrix = tuple[float, float, float, float, float, float]

IDENTITY: Matrix = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)

# TJ pen jumps wider than this many ems count as deliberate spacing.
GAP_EM = 0.3

_MAX_FORM_DEPTH = 8


def mat_mul(m1: Matrix, m2: Matrix) -> Matrix:
    a1, b1, c1, d1, e1, f1 = m1
    a2, b2, c2, d2, e2, f2 = m2
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
        e1 * a2 + f1 * c2 + e2,
        e1 * b2 + f1 * d2 + f2,
    )


def mat_apply(m: Matrix, x: float, y: float) -> tuple[float, float]:
    return (m[0] * x + m[2] * y + m[4], m[1] * x + m[3] * y + m[5])


def _translation(tx: float, ty: float) -> Matrix:
    return (1.0, 0.0, 0.0, 1.0, tx, ty)


@dataclass
class _GState:
    ctm: Matrix = IDENTITY
    font: ResolvedFont = DEFAULT_FONT
    size: float = 0.0
    char_spacing: float = 0.0
    word_spacing: float = 0.0
    hscale: float = 1.0
    leading: float = 0.0
    rise: float = 0.0


class ContentInterpreter:
    """Accumulates page content across one or more content streams."""

    def __init__(self, doc: PdfDocument, resources: dict, base_ctm: Matrix = IDENTITY):
        self.doc = doc
        self.snippets: list[RawSnippet] = []
        self.segments: list[PathSegment] = []
        self.image_refs: list[str] = []
        self._g = _GState(ctm=base_ctm)
        self._gstack: list[_GState] = []
        self._resources = resources
        self._tm: Matrix = IDENTITY
        self._tlm: Matrix = IDENTITY
        self._path: list[tuple[tuple[float, float], tuple[float, float]]] = []
        self._point: tuple[float, float] | None = None
        self._subpath_start: tuple[float, float] | None = None
        self._image_seen: dict[str, int] = {}

    # -- driving ---------------------------------------------------------

    def run(self, data: bytes, depth: int = 0) -> None:
        lex = Lexer(data)
        operands: list = []
        while True:
            lex.skip_whitespace()
            if lex.at_end():
                break
            ch = data[lex.pos : lex.pos + 1]
            if ch in b"/([<" or ch in b"+-." or ch.isdigit():
                operands.append(lex.parse_object())
                continue
            op = lex.read_regular_run()
            if not op:
                # Stray delimiter byte; step over it rather than loop.
                lex.pos += 1
                operands.clear()
                continue
            if op == b"BI":
                lex.pos = self._skip_inline_image(data, lex.pos)
                operands.clear()
                continue
            self._dispatch(op, operands, depth)
            operands.clear()

    @staticmethod
    def _skip_inline_image(data: bytes, pos: int) -> int:
        i = data.find(b"ID", pos)
        if i < 0:
            return len(data)
        i += 3  # ID plus one whitespace byte
        while True:
            j = data.find(b"EI", i)
            if j < 0:
                return len(data)
            before = data[j - 1 : j]
            after = data[j + 2 : j + 3]
            if before in WHITESPACE and (after == b"" or after in WHITESPACE or after in DELIMITERS):
                return j + 2
            i = j + 2

    # -- operator dispatch -------------------------------------------------

    def _dispatch(self, op: bytes, operands: list, depth: int) -> None:
        g = self._g
        if op == b"BT":
            self._tm = self._tlm = IDENTITY
        elif op == b"ET":
            pass
        elif op == b"Tf" and len(operands) >= 2:
            g.font = self._lookup_font(operands[-2])
            g.size = _as_float(operands[-1])
        elif op == b"Td" and len(operands) >= 2:
            self._text_move(_as_float(operands[-2]), _as_float(operands[-1]))
        elif op == b"TD" and len(operands) >= 2:
            g.leading = -_as_float(operands[-1])
            self._text_move(_as_float(operands[-2]), _as_float(operands[-1]))
        elif op == b"Tm" and len(operands) >= 6:
            vals = tuple(_as_float(v) for v in operands[-6:])
            self._tm = self._tlm = vals
        elif op == b"T*":
            self._text_move(0.0, -g.leading)
        elif op == b"TL" and operands:
            g.leading = _as_float(operands[-1])
        elif op == b"Tc" and operands:
            g.char_spacing = _as_float(operands[-1])
        elif op == b"Tw" and operands:
            g.word_spacing = _as_float(operands[-1])
        elif op == b"Tz" and operands:
            g.hscale = _as_float(operands[-1]) / 100.0
        elif op == b"Ts" and operands:
            g.rise = _as_float(operands[-1])
        elif op == b"Tj" and operands:
            self._show([operands[-1]])
        elif op == b"TJ" and operands:
            items = operands[-1]
            if isinstance(items, list):
                self._show(items)
        elif op == b"'" and operands:
            self._text_move(0.0, -g.leading)
            self._show([operands[-1]])
        elif op == b'"' and len(operands) >= 3:
            g.word_spacing = _as_float(operands[-3])
            g.char_spacing = _as_float(operands[-2])
            self._text_move(0.0, -g.leading)
            self._show([operands[-1]])
        elif op == b"cm" and len(operands) >= 6:
            m = tuple(_as_float(v) for v in operands[-6:])
            g.ctm = mat_mul(m, g.ctm)
        elif op == b"q":
            self._gstack.append(replace(g))
        elif op == b"Q":
            if self._gstack:
                self._g = self._gstack.pop()
        elif op == b"m" and len(operands) >= 2:
            p = self._device_point(operands[-2], operands[-1])
            self._point = self._subpath_start = p
        elif op == b"l" and len(operands) >= 2:
            p = self._device_point(operands[-2], operands[-1])
            self._line_to(p)
        elif op == b"c" and len(operands) >= 6:
            self._line_to(self._device_point(operands[-2], operands[-1]))
        elif op in (b"v", b"y") and len(operands) >= 4:
            self._line_to(self._device_point(operands[-2], operands[-1]))
        elif op == b"h":
            self._close_subpath()
        elif op == b"re" and len(operands) >= 4:
            self._rect(*(_as_float(v) for v in operands[-4:]))
        elif op in (b"S", b"F", b"f", b"f*", b"B", b"B*"):
            self._commit_path()
        elif op in (b"s", b"b", b"b*"):
            self._close_subpath()
            self._commit_path()
        elif op == b"n":
            self._discard_path()
        elif op == b"Do" and operands:
            self._do_xobject(operands[-1], depth)
        # Everything else (color, line style, clipping, marked content,
        # shading, type3 glyph metrics) has no geometric consequence here.

    # -- text --------------------------------------------------------------

    def _text_move(self, tx: float, ty: float) -> None:
        self._tlm = mat_mul(_translation(tx, ty), self._tlm)
        self._tm = self._tlm

    def _lookup_font(self, name) -> ResolvedFont:
        fonts = self.doc.resolve(self._resources.get("Font")) or {}
        entry = self.doc.resolve(fonts.get(str(name)))
        if not isinstance(entry, dict):
            return DEFAULT_FONT
        base = entry.get("BaseFont")
        widths = self.doc.resolve(entry.get("Widths")) or ()
        first = self.doc.resolve(entry.get("FirstChar")) or 0
        if not isinstance(first, int):
            first = 0
        widths = tuple(_as_float(w) for w in widths) if isinstance(widths, list) else ()
        return resolve_base_font(str(base) if base is not None else "Helvetica", widths, first)

    def _show(self, items: list) -> None:
        g = self._g
        font = g.font
        size = g.size
        chars: list[str] = []
        x = 0.0
        x_min = 0.0
        x_max = 0.0
        space_adv = (font.char_width(32) or 500.0) / 1000.0 * size * g.hscale
        for item in items:
            if isinstance(item, (int, float)) and not isinstance(item, bool):
                shift = -float(item) / 1000.0 * size * g.hscale
                if shift > GAP_EM * size * g.hscale and space_adv > 0:
                    chars.append(" " * max(1, round(shift / space_adv)))
                x += shift
            elif isinstance(item, bytes):
                for code in item:
                    w = font.char_width(code) / 1000.0 * size
                    adv = (w + g.char_spacing + (g.word_spacing if code == 32 else 0.0)) * g.hscale
                    chars.append(bytes((code,)).decode("cp1252", errors="replace"))
                    x += adv
            x_min = min(x_min, x)
            x_max = max(x_max, x)
        text = "".join(chars)
        m = mat_mul(self._tm, g.ctm)
        if text:
            asc = font.ascent / 1000.0 * size
            desc = font.descent / 1000.0 * size
            xs: list[float] = []
            ys: list[float] = []
            for tx in (x_min, x_max):
                for ty in (g.rise + desc, g.rise + asc):
                    px, py = mat_apply(m, tx, ty)
                    xs.append(px)
                    ys.append(py)
            sy = math.hypot(m[2], m[3])
            self.snippets.append(
                RawSnippet(
                    bbox=BBox(min(xs), min(ys), max(xs), max(ys)),
                    text=text,
                    font=FontInfo(
                        name=font.name,
                        size=size * sy,
                        italic=font.italic,
                        bold=font.bold,
                    ),
                    baseline_y=mat_apply(m, x_min, g.rise)[1],
                )
            )
        self._tm = mat_mul(_translation(x, 0.0), self._tm)

    # -- paths ---------------------------------------------------------------

    def _device_point(self, x, y) -> tuple[float, float]:
        return mat_apply(self._g.ctm, _as_float(x), _as_float(y))

    def _line_to(self, p: tuple[float, float]) -> None:
        if self._point is not None and p != self._point:
            self._path.append((self._point, p))
        self._point = p
        if self._subpath_start is None:
            self._subpath_start = p

    def _close_subpath(self) -> None:
        if self._subpath_start is not None and self._point != self._subpath_start:
            self._line_to(self._subpath_start)

    def _rect(self, x: float, y: float, w: float, h: float) -> None:
        c = self._g.ctm
        corners = [
            mat_apply(c, x, y),
            mat_apply(c, x + w, y),
            mat_apply(c, x + w, y + h),
            mat_apply(c, x, y + h),
        ]
        for i in range(4):
            a, b = corners[i], corners[(i + 1) % 4]
            if a != b:
                self._path.append((a, b))
        self._point = self._subpath_start = corners[0]

    def _commit_path(self) -> None:
        for p0, p1 in self._path:
            self.segments.append(PathSegment(p0, p1))
        self._discard_path()

    def _discard_path(self) -> None:
        self._path = []
        self._point = None
        self._subpath_start = None

    # -- xobjects --------------------------------------------------------------

    def _do_xobject(self, name, depth: int) -> None:
        xobjects = self.doc.resolve(self._resources.get("XObject")) or {}
        ref = xobjects.get(str(name)) if isinstance(xobjects, dict) else None
        obj = self.doc.resolve(ref)
        if not isinstance(obj, dict):
            return
        subtype = obj.get("Subtype")
        if subtype == Name("Image"):
            n = self._image_seen.get(str(name), 0) + 1
            self._image_seen[str(name)] = n
            self.image_refs.append(str(name) if n == 1 else f"{name}#{n}")
        elif subtype == Name("Form") and depth < _MAX_FORM_DEPTH:
            inner = ContentInterpreter(
                self.doc,
                self.doc.resolve(obj.get("Resources")) or self._resources,
                base_ctm=self._g.ctm,
            )
            matrix = self.doc.resolve(obj.get("Matrix"))
            if isinstance(matrix, list) and len(matrix) == 6:
                inner._g.ctm = mat_mul(tuple(_as_float(v) for v in matrix), inner._g.ctm)
            inner.run(self.doc.stream_bytes(ref), depth + 1)
            self.snippets.extend(inner.snippets)
            self.segments.extend(inner.segments)
            self.image_refs.extend(inner.image_refs)


def _as_float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        return 0.0
    return float(v)
