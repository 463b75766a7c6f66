"""Storage, annotation bookkeeping, and the REST layer."""

from .annotations import (
    AnnotationRecord,
    SessionStats,
    annotation_from_bytes,
    annotation_from_dict,
    compute_session_stats,
    coverage_violations,
    diff_corrections,
)
from .index import MetadataIndex, MetadataRecord
from .store import ObjectStore

__all__ = [
    "AnnotationRecord",
    "MetadataIndex",
    "MetadataRecord",
    "ObjectStore",
    "SessionStats",
    "annotation_from_bytes",
    "annotation_from_dict",
    "compute_session_stats",
    "coverage_violations",
    "diff_corrections",
]

