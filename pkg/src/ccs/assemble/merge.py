"""Contraction of consecutive same-label cells into document objects."""

from __future__ import annotations

from ..errors import MissingLabelError
from ..model import DocumentObject, Provenance, TextCell

PageCell = tuple[int, TextCell]


def join_texts(parts: list[str]) -> str:
    """Space-join, dewrapping hyphenated line breaks.

    A trailing hyphen joined to a lowercase continuation is a wrapped
    word; anything else keeps the hyphen and the space.
    """
    buf = ""
    for part in parts:
        if not part:
            continue
        if not buf:
            buf = part
        elif buf.endswith("-") and part[:1].islower():
            buf = buf[:-1] + part
        else:
            buf = buf + " " + part
    return buf


def label_runs(ordered: list[PageCell]) -> list[tuple[str, list[PageCell]]]:
    """Maximal runs of consecutive same-label cells, preserving order."""
    runs: list[tuple[str, list[PageCell]]] = []
    for page, cell in ordered:
        if cell.label is None:
            raise MissingLabelError(f"cell {cell.id} on page {page} has no label")
        if runs and runs[-1][0] == cell.label:
            runs[-1][1].append((page, cell))
        else:
            runs.append((cell.label, [(page, cell)]))
    return runs


def contract_run(label: str, cells: list[PageCell]) -> DocumentObject:
    return DocumentObject(
        type=label,
        text=join_texts([c.text for _, c in cells]),
        prov=tuple(Provenance(bbox=c.bbox, page=page) for page, c in cells),
    )


def merge_by_label(ordered: list[PageCell]) -> list[DocumentObject]:
    """One DocumentObject per same-label run of the ordered cells."""
    return [contract_run(label, cells) for label, cells in label_runs(ordered)]
