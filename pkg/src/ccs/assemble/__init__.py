"""Deterministic document assembly from labeled cells."""

from .build import DEFAULT_TYPE_NAMES, assemble
from .merge import join_texts, label_runs, merge_by_label
from .order import reading_order

__all__ = [
    "DEFAULT_TYPE_NAMES",
    "assemble",
    "join_texts",
    "label_runs",
    "merge_by_label",
    "reading_order",
]
