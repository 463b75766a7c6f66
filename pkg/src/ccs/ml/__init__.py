"""Template-specific cell classification: features, forests, metrics."""

from .features import (
    BASE_FEATURE_NAMES,
    DIRECTIONS,
    FEATURE_SCHEMA_VERSION,
    augment_with_neighbor_labels,
    extract_features,
    neighbor_graph,
)
from .forest import (
    RF_MODEL_FORMAT,
    PredictionResult,
    RandomForestModel,
    TrainConfig,
    train_forest,
)
from .metrics import evaluate

__all__ = [
    "BASE_FEATURE_NAMES",
    "DIRECTIONS",
    "FEATURE_SCHEMA_VERSION",
    "RF_MODEL_FORMAT",
    "PredictionResult",
    "RandomForestModel",
    "TrainConfig",
    "augment_with_neighbor_labels",
    "evaluate",
    "extract_features",
    "neighbor_graph",
    "train_forest",
]
