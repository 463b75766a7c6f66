"""Synthetic two-template page corpora for classifier tests.

Two layout families with distinct geometry ("alpha": single-column letter,
"beta": two-column A4). Labels follow the 6-class journal scheme. The
corpora are heavily imbalanced (text dominates, ~500 text cells per title)
and contain one deliberately ambiguous class: the word cells in a table's
first column look like short body-text lines in base features, but their
directional neighbors are numeric table cells, so refinement stages have
real signal to exploit.
"""

from __future__ import annotations

import numpy as np

from ccs.model import (
    BBox,
    CellStyle,
    Label,
    LabelSet,
    PageGeometry,
    ParsedDocument,
    ParsedPage,
    TextCell,
)

LABELS6 = LabelSet(
    (
        Label("title", "#ff0000"),
        Label("author", "#00b050"),
        Label("subtitle", "#8b0000"),
        Label("text", "#ffd700"),
        Label("picture", "#fffff0"),
        Label("table", "#4682b4"),
    )
)

_WORDS = (
    "the quick model reads a page and finds its layout then sorts every "
    "cell into classes while keeping order stable across runs for all "
    "documents in this corpus of measured samples"
).split()

_ROW_WORDS = ("alloy", "oxide", "steel", "glass", "resin", "fiber", "blend")


class _PageBuilder:
    def __init__(self, width, height, page_number):
        self.geometry = PageGeometry(width, height, page_number)
        self.cells = []
        self.labels = []

    def add(self, x0, y0, x1, y1, text, label, font=10.0, bold=False, italic=False):
        self.cells.append(
            TextCell(
                len(self.cells),
                BBox(x0, y0, x1, y1),
                text,
                CellStyle(italic=italic, bold=bold, font_size=font),
            )
        )
        self.labels.append(label)

    def build(self):
        return ParsedPage(self.geometry, tuple(self.cells)), tuple(self.labels)


def _sentence(rng, n):
    words = [_WORDS[int(rng.integers(0, len(_WORDS)))] for _ in range(n)]
    if rng.random() < 0.1:
        words.append(str(int(rng.integers(1900, 2030))))
    return " ".join(words)


def _text_run(b, rng, x0, x1, y, bottom, max_lines):
    """Paragraph of body-text lines; returns the new y cursor."""
    n_lines = int(rng.integers(6, max_lines))
    for i in range(n_lines):
        h = 11.0
        if y - h < bottom:
            break
        frac = rng.uniform(0.35, 0.85) if i == n_lines - 1 else rng.uniform(0.96, 1.0)
        w = (x1 - x0) * frac
        b.add(x0, y - h, x0 + w, y, _sentence(rng, max(2, int(w / 30))), "text",
              font=10.0 + rng.uniform(-0.3, 0.3))
        y -= h + 2.0
    return y - 10.0


def _subtitle(b, rng, x0, x1, y, bottom):
    h = 13.0
    if y - h < bottom:
        return bottom
    w = rng.uniform(120, min(300, x1 - x0))
    b.add(x0, y - h, x0 + w, y, _sentence(rng, 3).title(), "subtitle",
          font=12.0 + rng.uniform(-0.3, 0.3), bold=True)
    return y - h - 8.0


def _picture(b, rng, x0, x1, y, bottom):
    h = rng.uniform(100, 170)
    if y - h < bottom:
        return bottom
    w = (x1 - x0) * rng.uniform(0.55, 0.95)
    xs = x0 + rng.uniform(0, (x1 - x0) - w)
    b.add(xs, y - h, xs + w, y, "", "picture", font=10.0)
    return y - h - 10.0


def _table(b, rng, x0, x1, y, bottom, max_cols):
    """Grid of table cells; the first column holds short words whose base
    features resemble body text, later columns are clearly numeric."""
    rows = int(rng.integers(3, 7))
    cols = int(rng.integers(2, max_cols + 1))
    pitch = 11.5
    if y - rows * pitch < bottom:
        return bottom
    col_w = (x1 - x0) / cols
    for r in range(rows):
        cy = y - r * pitch
        for c in range(cols):
            cx = x0 + c * col_w + 2.0
            if c == 0:
                word = _ROW_WORDS[int(rng.integers(0, len(_ROW_WORDS)))]
                w = rng.uniform(0.45, 0.8) * (col_w - 6)
                b.add(cx, cy - 9.5, cx + w, cy, word, "table",
                      font=9.4 + rng.uniform(-0.5, 0.5))
            else:
                value = f"{rng.uniform(0, 100):.{int(rng.integers(0, 3))}f}"
                w = rng.uniform(0.3, 0.5) * (col_w - 6)
                b.add(cx, cy - 9.5, cx + w, cy, value, "table",
                      font=9.4 + rng.uniform(-0.5, 0.5))
    return y - rows * pitch - 10.0


def _front_matter(b, rng, width, top):
    """Title plus author lines on a document's first page."""
    tw = rng.uniform(260, 380)
    tx = (width - tw) / 2.0
    b.add(tx, top - 21.0, tx + tw, top, _sentence(rng, 6).title(), "title",
          font=19.0 + rng.uniform(-0.8, 0.8), bold=True)
    y = top - 29.0
    for _ in range(int(rng.integers(1, 4))):
        aw = rng.uniform(150, 260)
        ax = (width - aw) / 2.0
        b.add(ax, y - 11.0, ax + aw, y, _sentence(rng, 4).title(), "author",
              font=10.0, italic=True)
        y -= 13.0
    return y - 12.0


def _fill_column(b, rng, x0, x1, y, bottom, max_table_cols):
    while y > bottom + 40:
        roll = rng.random()
        if roll < 0.08:
            y = _subtitle(b, rng, x0, x1, y, bottom)
        elif roll < 0.13:
            y = _picture(b, rng, x0, x1, y, bottom)
        elif roll < 0.20:
            y = _table(b, rng, x0, x1, y, bottom, max_table_cols)
        else:
            y = _text_run(b, rng, x0, x1, y, bottom, max_lines=16)
    return y


def _alpha_page(rng, page_number):
    width, height = 612.0, 792.0
    b = _PageBuilder(width, height, page_number)
    top, bottom = height - 72.0, 72.0
    y = _front_matter(b, rng, width, top) if page_number == 1 else top
    _fill_column(b, rng, 72.0, 540.0, y, bottom, max_table_cols=4)
    return b.build()


def _beta_page(rng, page_number):
    width, height = 595.0, 842.0
    b = _PageBuilder(width, height, page_number)
    top, bottom = height - 50.0, 50.0
    y = _front_matter(b, rng, width, top) if page_number == 1 else top
    _fill_column(b, rng, 50.0, 285.0, y, bottom, max_table_cols=3)
    _fill_column(b, rng, 310.0, 545.0, y, bottom, max_table_cols=3)
    return b.build()


_TEMPLATES = {"alpha": (_alpha_page, 13), "beta": (_beta_page, 5)}


def make_corpus(template: str, n_pages: int, seed: int):
    """List of (ParsedPage, labels) tuples; one title per simulated document."""
    page_fn, pages_per_doc = _TEMPLATES[template]
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n_pages:
        for in_doc in range(pages_per_doc):
            if len(out) >= n_pages:
                break
            out.append(page_fn(rng, in_doc + 1))
    return out


def label_counts(corpus):
    counts = {}
    for _, labels in corpus:
        for name in labels:
            counts[name] = counts.get(name, 0) + 1
    return counts


def split_corpus(corpus, train_fraction=0.8):
    cut = int(len(corpus) * train_fraction)
    return corpus[:cut], corpus[cut:]


def corpus_documents(template: str, n_docs: int, seed: int, pages_per_doc: int | None = None):
    """Whole annotated documents (cells carry labels) for pipeline tests."""
    page_fn, default_ppd = _TEMPLATES[template]
    pages_per_doc = pages_per_doc or default_ppd
    rng = np.random.default_rng(seed)
    docs = []
    for d in range(n_docs):
        pages = []
        for in_doc in range(pages_per_doc):
            page, labels = page_fn(rng, in_doc + 1)
            cells = tuple(c.with_label(l) for c, l in zip(page.cells, labels))
            pages.append(ParsedPage(page.geometry, cells, page.paths, page.image_refs))
        docs.append(ParsedDocument(f"{template}-{d:03d}", f"{template}-{d:03d}.pdf", tuple(pages)))
    return docs
