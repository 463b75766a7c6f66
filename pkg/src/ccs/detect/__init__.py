"""Layout rasters, detector-box labeling, and the confidence sweep."""

from .heuristic import heuristic_table_detector
from .overlap import overlap_labeling, sweep_confidence
from .raster import BACKGROUND, CELL_INTENSITY, PATH_INTENSITY, LayoutRaster, render_layout_image
from .serialize import DETECTIONS_FORMAT, detections_from_bytes, detections_to_bytes
from .types import Detection, SweepPoint, SweepResult

__all__ = [
    "BACKGROUND",
    "CELL_INTENSITY",
    "DETECTIONS_FORMAT",
    "Detection",
    "LayoutRaster",
    "PATH_INTENSITY",
    "SweepPoint",
    "SweepResult",
    "detections_from_bytes",
    "detections_to_bytes",
    "heuristic_table_detector",
    "overlap_labeling",
    "render_layout_image",
    "sweep_confidence",
]
