"""Resolution of font dictionaries to usable metrics.

Only the fourteen standard Type1 fonts carry metrics here; anything else
falls back to Helvetica shapes, optionally corrected by a /Widths array
from the font dictionary itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fonts_data import ASCENT_DESCENT, WIDTHS

_FALLBACK = "Helvetica"

# Common PostScript spellings of the standard faces.
_ALIASES = {
    "Arial": "Helvetica",
    "Arial-Bold": "Helvetica-Bold",
    "Arial-Italic": "Helvetica-Oblique",
    "Arial-BoldItalic": "Helvetica-BoldOblique",
    "TimesNewRoman": "Times-Roman",
    "Times": "Times-Roman",
    "CourierNew": "Courier",
}


@dataclass(frozen=True)
class ResolvedFont:
    """Everything the interpreter needs to place and measure one font."""

    name: str
    widths: tuple = field(repr=False, default=())
    ascent: float = 718.0
    descent: float = -207.0
    italic: bool = False
    bold: bool = False
    # Optional per-document overrides (from /Widths + /FirstChar).
    width_override: tuple = field(repr=False, default=())
    first_char: int = 0

    def char_width(self, code: int) -> float:
        """Glyph width for a byte code, in 1/1000 text-space units."""
        if self.width_override:
            i = code - self.first_char
            if 0 <= i < len(self.width_override):
                w = self.width_override[i]
                if w > 0:
                    return w
        return self.widths[code] if code < len(self.widths) else 0.0


def _style_flags(name: str) -> tuple[bool, bool]:
    low = name.lower()
    italic = "italic" in low or "oblique" in low
    bold = "bold" in low
    return italic, bold


def resolve_base_font(base_font: str, width_override=(), first_char: int = 0) -> ResolvedFont:
    # Subset-tagged names look like "ABCDEF+Times-Roman".
    name = base_font.split("+")[-1]
    key = _ALIASES.get(name, name)
    if key not in WIDTHS:
        # Map style suffixes of unknown families onto Helvetica variants so
        # bold/italic flags still land; metrics are approximate by design.
        italic, bold = _style_flags(name)
        key = {
            (False, False): "Helvetica",
            (False, True): "Helvetica-Bold",
            (True, False): "Helvetica-Oblique",
            (True, True): "Helvetica-BoldOblique",
        }[(italic, bold)]
    else:
        italic, bold = _style_flags(key)
    ascent, descent = ASCENT_DESCENT[key]
    return ResolvedFont(
        name=name,
        widths=tuple(WIDTHS[key]),
        ascent=ascent,
        descent=descent,
        italic=italic,
        bold=bold,
        width_override=tuple(width_override),
        first_char=first_char,
    )


DEFAULT_FONT = resolve_base_font(_FALLBACK)
