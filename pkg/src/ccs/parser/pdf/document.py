"""Cross-reference table reader and indirect-object store.

Supports the classic xref-table layout (sections of 20-byte entries plus a
trailer dictionary, chained via /Prev). Cross-reference streams and object
streams are out of scope; files using them fail with a parse error rather
than being misread.
"""

from __future__ import annotations

import base64
import re
import zlib

from ...errors import ParseFailureError, UnsupportedEncryptionError
from .objects import Lexer, Name, Ref, WHITESPACE

_XREF_ENTRY = re.compile(rb"(\d{10})\s(\d{5})\s([nf])")


class PdfDocument:
    def __init__(self, data: bytes):
        self.data = data
        self._offsets: dict[int, int] = {}
        self._cache: dict[int, object] = {}
        self._streams: dict[int, bytes] = {}
        self._trailer: dict = {}
        self._read_xref_chain()
        if "Encrypt" in self._trailer:
            raise UnsupportedEncryptionError("encrypted documents are not supported")

    # ---------------------------------------------------------------- xref

    def _read_xref_chain(self) -> None:
        data = self.data
        tail_start = max(0, len(data) - 2048)
        idx = data.rfind(b"startxref", tail_start)
        if idx < 0:
            raise ParseFailureError("startxref marker not found", offset=len(data))
        lex = Lexer(data, idx + len(b"startxref"))
        lex.skip_whitespace()
        run = lex.read_regular_run()
        if not run.isdigit():
            raise ParseFailureError("startxref offset is not a number", offset=lex.pos)
        offset = int(run)

        seen = set()
        while True:
            if offset in seen:
                raise ParseFailureError("xref /Prev chain loops", offset=offset)
            seen.add(offset)
            trailer = self._read_xref_section(offset)
            if not self._trailer:
                self._trailer = trailer
            prev = trailer.get("Prev")
            if prev is None:
                return
            if not isinstance(prev, (int, float)):
                raise ParseFailureError("bad /Prev entry", offset=offset)
            offset = int(prev)

    def _read_xref_section(self, offset: int) -> dict:
        data = self.data
        if offset < 0 or offset >= len(data):
            raise ParseFailureError("xref offset out of range", offset=offset)
        lex = Lexer(data, offset)
        if not lex.try_keyword(b"xref"):
            raise ParseFailureError("expected xref table", offset=offset)
        while True:
            lex.skip_whitespace()
            if lex.try_keyword(b"trailer"):
                break
            start_run = lex.read_regular_run()
            lex.skip_whitespace()
            count_run = lex.read_regular_run()
            if not (start_run.isdigit() and count_run.isdigit()):
                raise ParseFailureError("malformed xref subsection header", offset=lex.pos)
            first, count = int(start_run), int(count_run)
            lex.skip_whitespace()
            for i in range(count):
                entry = data[lex.pos:lex.pos + 20]
                m = _XREF_ENTRY.match(entry)
                if not m:
                    raise ParseFailureError("malformed xref entry", offset=lex.pos)
                if m.group(3) == b"n":
                    # first xref section read wins (newest increment)
                    self._offsets.setdefault(first + i, int(m.group(1)))
                lex.pos += 20
                lex.skip_whitespace()
        trailer = lex.parse_object()
        if not isinstance(trailer, dict):
            raise ParseFailureError("trailer is not a dictionary", offset=offset)
        return trailer

    # ------------------------------------------------------------- objects

    def resolve(self, obj):
        """Follow indirect references (possibly chained) to a direct object."""
        seen = 0
        while isinstance(obj, Ref):
            obj = self._load(obj.num)
            seen += 1
            if seen > 32:
                raise ParseFailureError("reference chain too deep", offset=0)
        return obj

    def _load(self, num: int):
        if num in self._cache:
            return self._cache[num]
        offset = self._offsets.get(num)
        if offset is None:
            self._cache[num] = None
            return None
        lex = Lexer(self.data, offset)
        lex.skip_whitespace()
        header = lex.read_regular_run()
        lex.skip_whitespace()
        lex.read_regular_run()  # generation
        if not header.isdigit() or int(header) != num:
            raise ParseFailureError(f"object {num} not at recorded offset", offset=offset)
        lex.expect_keyword(b"obj")
        obj = lex.parse_object()
        if isinstance(obj, dict) and lex.try_keyword(b"stream"):
            # EOL after the keyword: CRLF or LF
            if self.data[lex.pos:lex.pos + 2] == b"\r\n":
                lex.pos += 2
            elif self.data[lex.pos:lex.pos + 1] in (b"\n", b"\r"):
                lex.pos += 1
            length = self.resolve(obj.get("Length"))
            if not isinstance(length, int):
                raise ParseFailureError(f"stream object {num} has no usable /Length", offset=offset)
            raw = self.data[lex.pos:lex.pos + length]
            self._streams[num] = raw
        self._cache[num] = obj
        return obj

    def stream_bytes(self, ref: Ref) -> bytes:
        """Decoded stream content of the referenced stream object."""
        obj = self.resolve(ref)
        if not isinstance(obj, dict) or ref.num not in self._streams:
            raise ParseFailureError(f"object {ref.num} is not a stream", offset=0)
        raw = self._streams[ref.num]
        filters = self.resolve(obj.get("Filter"))
        if filters is None:
            return raw
        if isinstance(filters, (Name, str)):
            filters = [filters]
        parms = self.resolve(obj.get("DecodeParms"))
        if isinstance(parms, dict) and int(self.resolve(parms.get("Predictor")) or 1) > 1:
            raise ParseFailureError("stream predictors are not supported", offset=0)
        data = raw
        for f in filters:
            name = str(self.resolve(f))
            if name == "FlateDecode":
                try:
                    data = zlib.decompress(data)
                except zlib.error as exc:
                    raise ParseFailureError(f"broken FlateDecode stream: {exc}", offset=0) from None
            elif name == "ASCII85Decode":
                body = bytes(data.split(b"~>", 1)[0])
                try:
                    data = base64.a85decode(body, adobe=False, ignorechars=WHITESPACE)
                except ValueError as exc:
                    raise ParseFailureError(f"broken ASCII85 stream: {exc}", offset=0) from None
            else:
                raise ParseFailureError(f"unsupported stream filter {name!r}", offset=0)
        return data

    # --------------------------------------------------------------- pages

    def pages(self) -> list[dict]:
        """Flattened page dictionaries with inherited attributes resolved."""
        root = self.resolve(self._trailer.get("Root"))
        if not isinstance(root, dict):
            raise ParseFailureError("missing document catalog", offset=0)
        tree = self.resolve(root.get("Pages"))
        if not isinstance(tree, dict):
            raise ParseFailureError("catalog has no page tree", offset=0)
        out: list[dict] = []
        inheritable = ("Resources", "MediaBox", "Rotate")

        def walk(node: dict, inherited: dict, depth: int) -> None:
            if depth > 64:
                raise ParseFailureError("page tree too deep", offset=0)
            node_type = str(self.resolve(node.get("Type")) or "")
            carried = dict(inherited)
            for key in inheritable:
                if key in node:
                    carried[key] = node[key]
            if node_type == "Pages" or "Kids" in node:
                kids = self.resolve(node.get("Kids")) or []
                for kid in kids:
                    kd = self.resolve(kid)
                    if isinstance(kd, dict):
                        walk(kd, carried, depth + 1)
            else:
                page = dict(carried)
                page.update(node)
                out.append(page)

        walk(tree, {}, 0)
        return out
