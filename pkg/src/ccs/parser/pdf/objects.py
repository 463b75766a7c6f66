"""Lexer and object parser for the PDF object syntax.

Covers the subset used by classic (non-cross-reference-stream) files:
numbers, names, literal and hex strings, arrays, dictionaries, booleans,
null, and indirect references. Positions are byte offsets into the
original buffer so errors can point at the offending spot.
"""

from __future__ import annotations

from typing import NamedTuple

from ...errors import ParseFailureError

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"


class Ref(NamedTuple):
    num: int
    gen: int


class Name(str):
    """PDF name object; distinct from strings for dictionary keys."""


class Lexer:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def fail(self, message: str) -> ParseFailureError:
        return ParseFailureError(message, offset=self.pos)

    # ------------------------------------------------------------- basics

    def skip_whitespace(self) -> None:
        data = self.data
        n = len(data)
        while self.pos < n:
            b = data[self.pos]
            if b in WHITESPACE:
                self.pos += 1
            elif b == 0x25:  # % comment to end of line
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def at_end(self) -> bool:
        self.skip_whitespace()
        return self.pos >= len(self.data)

    def peek(self) -> int:
        self.skip_whitespace()
        if self.pos >= len(self.data):
            raise self.fail("unexpected end of data")
        return self.data[self.pos]

    def read_regular_run(self) -> bytes:
        """A run of regular (non-delimiter, non-space) characters."""
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos] not in WHITESPACE and data[self.pos] not in DELIMITERS:
            self.pos += 1
        return data[start:self.pos]

    def expect_keyword(self, word: bytes) -> None:
        self.skip_whitespace()
        if self.data[self.pos:self.pos + len(word)] != word:
            raise self.fail(f"expected {word.decode()!r}")
        self.pos += len(word)

    def try_keyword(self, word: bytes) -> bool:
        save = self.pos
        self.skip_whitespace()
        end = self.pos + len(word)
        if self.data[self.pos:end] == word:
            after = self.data[end:end + 1]
            if not after or after[0] in WHITESPACE or after[0] in DELIMITERS:
                self.pos = end
                return True
        self.pos = save
        return False

    # ------------------------------------------------------------ objects

    def parse_object(self):
        b = self.peek()
        data = self.data
        if b == 0x2F:  # /
            return self._parse_name()
        if b == 0x28:  # (
            return self._parse_literal_string()
        if b == 0x3C:  # < or <<
            if data[self.pos:self.pos + 2] == b"<<":
                return self._parse_dict()
            return self._parse_hex_string()
        if b == 0x5B:  # [
            self.pos += 1
            items = []
            while self.peek() != 0x5D:
                items.append(self.parse_object())
            self.pos += 1
            return items
        if b == 0x5D or b == 0x3E:
            raise self.fail("unbalanced collection close")
        word = None
        if b not in b"+-.0123456789":
            save = self.pos
            word = self.read_regular_run()
            if word == b"true":
                return True
            if word == b"false":
                return False
            if word == b"null":
                return None
            self.pos = save
            raise self.fail(f"unexpected token {word[:20]!r}")
        return self._parse_number_or_ref()

    def _parse_number_or_ref(self):
        first = self._parse_number()
        if isinstance(first, int) and first >= 0:
            save = self.pos
            self.skip_whitespace()
            if self.pos < len(self.data) and self.data[self.pos] in b"0123456789":
                second = self.read_regular_run()
                if second.isdigit() and self.try_keyword(b"R"):
                    return Ref(first, int(second))
            self.pos = save
        return first

    def _parse_number(self):
        self.skip_whitespace()
        raw = self.read_regular_run()
        try:
            if b"." in raw:
                return float(raw)
            return int(raw)
        except ValueError:
            raise self.fail(f"bad number {raw[:20]!r}") from None

    def _parse_name(self) -> Name:
        self.pos += 1  # consume /
        raw = self.read_regular_run()
        out = bytearray()
        i = 0
        while i < len(raw):
            if raw[i] == 0x23 and i + 2 < len(raw):  # #xx hex escape
                try:
                    out.append(int(raw[i + 1:i + 3], 16))
                    i += 3
                    continue
                except ValueError:
                    pass
            out.append(raw[i])
            i += 1
        return Name(out.decode("latin-1"))

    def _parse_literal_string(self) -> bytes:
        data = self.data
        self.pos += 1
        out = bytearray()
        depth = 1
        while self.pos < len(data):
            b = data[self.pos]
            self.pos += 1
            if b == 0x5C:  # backslash escape
                if self.pos >= len(data):
                    break
                e = data[self.pos]
                self.pos += 1
                mapping = {0x6E: 10, 0x72: 13, 0x74: 9, 0x62: 8, 0x66: 12}
                if e in mapping:
                    out.append(mapping[e])
                elif e in b"01234567":  # octal, up to 3 digits
                    digits = chr(e)
                    while len(digits) < 3 and self.pos < len(data) and data[self.pos] in b"01234567":
                        digits += chr(data[self.pos])
                        self.pos += 1
                    out.append(int(digits, 8) & 0xFF)
                elif e in b"\r\n":  # line continuation
                    if e == 0x0D and self.pos < len(data) and data[self.pos] == 0x0A:
                        self.pos += 1
                else:
                    out.append(e)
            elif b == 0x28:
                depth += 1
                out.append(b)
            elif b == 0x29:
                depth -= 1
                if depth == 0:
                    return bytes(out)
                out.append(b)
            else:
                out.append(b)
        raise self.fail("unterminated string")

    def _parse_hex_string(self) -> bytes:
        self.pos += 1
        digits = []
        data = self.data
        while self.pos < len(data):
            b = data[self.pos]
            self.pos += 1
            if b == 0x3E:
                if len(digits) % 2:
                    digits.append("0")
                return bytes(int("".join(digits[i:i + 2]), 16) for i in range(0, len(digits), 2))
            if chr(b) in "0123456789abcdefABCDEF":
                digits.append(chr(b))
        raise self.fail("unterminated hex string")

    def _parse_dict(self) -> dict:
        self.pos += 2
        out = {}
        while True:
            self.skip_whitespace()
            if self.data[self.pos:self.pos + 2] == b">>":
                self.pos += 2
                return out
            if self.peek() != 0x2F:
                raise self.fail("dictionary key must be a name")
            key = self._parse_name()
            out[str(key)] = self.parse_object()
