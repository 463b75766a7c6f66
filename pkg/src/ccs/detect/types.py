"""Detection and sweep result types."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import BBox


@dataclass(frozen=True)
class Detection:
    """One detector box in page coordinates."""

    bbox: BBox
    confidence: float
    klass: str = "table"

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    best_threshold: float
    best_f1: float
