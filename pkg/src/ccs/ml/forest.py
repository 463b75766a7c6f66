"""Random-forest cell classifier with iterative neighbor-label refinement.

Stage 0 classifies cells from base geometric features. Each refinement
stage re-classifies with the previous stage's predicted labels of the four
directional neighbors appended as one-hot blocks. During training those
neighbor labels come from out-of-fold cross-prediction over pages, never
from ground truth, so training matches serving.

Everything is deterministic given the config seed: per-tree seeds are
derived with splitmix64 from (seed, stage, fold, tree), so trees could be
built in parallel without changing the result.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import EmptyDatasetError, SchemaMismatchError, UnknownLabelError
from ..kernels import GOLDEN, apply_tree, bootstrap_indices, build_tree, mix64
from ..model import LabelSet, ParsedPage, label_set_from_list, label_set_to_list
from ..model.serialize import canonical_json_bytes
from .features import (
    FEATURE_SCHEMA_VERSION,
    augment_with_neighbor_labels,
    extract_features,
    neighbor_graph,
)

RF_MODEL_FORMAT = "rf-model.v1"

_MASK = 0xFFFFFFFFFFFFFFFF
_SALT = 0x243F6A8885A308D3

_TREE_KEYS = ("feature", "threshold", "left", "right", "label")


def _derive_seed(*parts: int) -> int:
    z = _SALT
    for p in parts:
        z = mix64((z ^ (p & _MASK)) + GOLDEN)
    return z


@dataclass(frozen=True)
class TrainConfig:
    n_trees: int = 100
    max_depth: int = -1  # -1 = unlimited
    min_leaf: int = 2
    seed: int = 0
    n_refinement_stages: int = 2
    class_weight: tuple[float, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "seed": self.seed,
            "n_refinement_stages": self.n_refinement_stages,
            "class_weight": list(self.class_weight) if self.class_weight else None,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TrainConfig":
        known = {k: raw[k] for k in raw if k in cls.__dataclass_fields__}
        if known.get("class_weight") is not None:
            known["class_weight"] = tuple(float(w) for w in known["class_weight"])
        return cls(**known)


@dataclass(frozen=True)
class PredictionResult:
    labels: tuple[str, ...]
    confidences: tuple[float, ...]


class _Ensemble:
    """A bag of trees over a fixed feature arity."""

    __slots__ = ("trees", "n_features")

    def __init__(self, trees: list[dict], n_features: int):
        self.trees = trees
        self.n_features = n_features

    def vote_counts(self, X: np.ndarray, n_classes: int) -> np.ndarray:
        if X.shape[1] != self.n_features:
            raise SchemaMismatchError(
                f"feature arity {X.shape[1]} does not match model arity {self.n_features}"
            )
        counts = np.zeros((X.shape[0], n_classes), dtype=np.int32)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            pred = apply_tree(X, *(tree[k] for k in _TREE_KEYS))
            counts[rows, pred] += 1
        return counts


def _votes_to_labels(counts: np.ndarray) -> np.ndarray:
    # np.argmax keeps the first maximum: ties go to the lower label index.
    return np.argmax(counts, axis=1).astype(np.int32)


def _train_ensemble(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    weights: np.ndarray,
    config: TrainConfig,
    stage: int,
    fold: int,
) -> _Ensemble:
    n, n_features = X.shape
    max_features = min(n_features, math.ceil(math.sqrt(n_features)))
    trees = []
    for t in range(config.n_trees):
        boot_seed = _derive_seed(config.seed, stage, fold, t, 0)
        split_seed = _derive_seed(config.seed, stage, fold, t, 1)
        idx = bootstrap_indices(n, n, boot_seed)
        trees.append(
            build_tree(
                X,
                y,
                n_classes,
                idx,
                max_features,
                config.min_leaf,
                config.max_depth,
                split_seed,
                weights,
            )
        )
    return _Ensemble(trees, n_features)


@dataclass
class RandomForestModel:
    label_set: LabelSet
    config: TrainConfig
    stages: list[_Ensemble]
    feature_schema_version: int = FEATURE_SCHEMA_VERSION
    metadata: dict = field(default_factory=dict)

    # ------------------------------------------------------------ predict

    def _check_compatible(self, X: np.ndarray) -> None:
        if self.feature_schema_version != FEATURE_SCHEMA_VERSION:
            raise SchemaMismatchError(
                f"model feature schema v{self.feature_schema_version}, "
                f"extractor is v{FEATURE_SCHEMA_VERSION}"
            )
        if X.shape[1] != self.stages[0].n_features:
            raise SchemaMismatchError(
                f"feature arity {X.shape[1]} does not match model arity "
                f"{self.stages[0].n_features}"
            )

    def predict(self, page: ParsedPage) -> PredictionResult:
        if not page.cells:
            return PredictionResult((), ())
        X = extract_features(page)
        self._check_compatible(X)
        n_classes = len(self.label_set)
        neighbors = neighbor_graph(page)
        counts = self.stages[0].vote_counts(X, n_classes)
        labels = _votes_to_labels(counts)
        for stage in self.stages[1:]:
            Xa = augment_with_neighbor_labels(X, neighbors, labels, n_classes)
            counts = stage.vote_counts(Xa, n_classes)
            labels = _votes_to_labels(counts)
        names = self.label_set.names()
        n_trees = len(self.stages[-1].trees)
        rows = np.arange(len(labels))
        conf = counts[rows, labels] / float(n_trees)
        return PredictionResult(
            tuple(names[i] for i in labels),
            tuple(float(c) for c in conf),
        )

    # -------------------------------------------------------- persistence

    def to_dict(self) -> dict:
        return {
            "format": RF_MODEL_FORMAT,
            "schema_version": 1,
            "feature_schema_version": self.feature_schema_version,
            "label_set": label_set_to_list(self.label_set),
            "config": self.config.to_dict(),
            "metadata": dict(sorted(self.metadata.items())),
            "stages": [
                {
                    "n_features": ens.n_features,
                    "trees": [
                        {key: tree[key].tolist() for key in _TREE_KEYS}
                        for tree in ens.trees
                    ],
                }
                for ens in self.stages
            ],
        }

    def to_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_dict())

    @classmethod
    def from_dict(cls, raw: dict) -> "RandomForestModel":
        if raw.get("format") != RF_MODEL_FORMAT:
            raise SchemaMismatchError(f"expected {RF_MODEL_FORMAT}, got {raw.get('format')!r}")
        if raw.get("schema_version") != 1:
            raise SchemaMismatchError(f"unsupported model schema_version {raw.get('schema_version')!r}")
        stages = []
        for s in raw["stages"]:
            trees = []
            for t in s["trees"]:
                trees.append(
                    {
                        "feature": np.asarray(t["feature"], dtype=np.int32),
                        "threshold": np.asarray(t["threshold"], dtype=np.float64),
                        "left": np.asarray(t["left"], dtype=np.int32),
                        "right": np.asarray(t["right"], dtype=np.int32),
                        "label": np.asarray(t["label"], dtype=np.int32),
                    }
                )
            stages.append(_Ensemble(trees, int(s["n_features"])))
        return cls(
            label_set=label_set_from_list(raw["label_set"]),
            config=TrainConfig.from_dict(raw["config"]),
            stages=stages,
            feature_schema_version=int(raw["feature_schema_version"]),
            metadata=dict(raw.get("metadata", {})),
        )

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "RandomForestModel":
        with open(path, "rb") as fh:
            return cls.from_dict(json.load(fh))


# ------------------------------------------------------------------ training


class _PageData:
    __slots__ = ("X", "y", "neighbors")

    def __init__(self, X, y, neighbors):
        self.X = X
        self.y = y
        self.neighbors = neighbors


def _prepare_pages(
    pages: Iterable[tuple[ParsedPage, Sequence[str]]], label_set: LabelSet
) -> list[_PageData]:
    prepared = []
    for page, labels in pages:
        if len(labels) != len(page.cells):
            raise UnknownLabelError(
                f"page {page.geometry.page_number}: {len(labels)} labels for "
                f"{len(page.cells)} cells"
            )
        if not page.cells:
            continue
        y = np.empty(len(labels), dtype=np.int32)
        for i, name in enumerate(labels):
            try:
                y[i] = label_set.index(name)
            except KeyError:
                raise UnknownLabelError(f"label {name!r} not in label set") from None
        prepared.append(_PageData(extract_features(page), y, neighbor_graph(page)))
    return prepared


def _fold_assignment(n_pages: int, n_folds: int, seed: int) -> np.ndarray:
    order = np.arange(n_pages)
    s = seed
    for j in range(n_pages - 1):  # Fisher-Yates with splitmix64 draws
        s_draw = mix64((s + (j + 1) * GOLDEN) & _MASK)
        t = j + int(s_draw % (n_pages - j))
        order[j], order[t] = order[t], order[j]
    folds = np.empty(n_pages, dtype=np.int32)
    for pos, page_idx in enumerate(order):
        folds[page_idx] = pos % n_folds
    return folds


def _stack(indexed_pages, rows_of) -> tuple[np.ndarray, np.ndarray]:
    xs = [rows_of(i, p) for i, p in indexed_pages]
    ys = [p.y for _, p in indexed_pages]
    return np.ascontiguousarray(np.concatenate(xs)), np.concatenate(ys)


def train_forest(
    annotated_pages: Sequence[tuple[ParsedPage, Sequence[str]]],
    label_set: LabelSet,
    config: TrainConfig | None = None,
) -> RandomForestModel:
    """Train the staged forest on labeled pages.

    `annotated_pages` pairs each page with one label per cell (cell-id
    order). Raises "empty-dataset" when no labeled cells exist and
    "unknown-label" when a label is outside the label set.
    """
    config = config or TrainConfig()
    pages = _prepare_pages(annotated_pages, label_set)
    if not pages:
        raise EmptyDatasetError("no labeled cells to train on")
    n_classes = len(label_set)
    if config.class_weight is None:
        weights = np.ones(n_classes)
    else:
        if len(config.class_weight) != n_classes:
            raise ValueError("class_weight length must equal label count")
        weights = np.asarray(config.class_weight, dtype=np.float64)

    n_pages = len(pages)
    n_folds = min(5, n_pages)
    folds = _fold_assignment(n_pages, n_folds, _derive_seed(config.seed, 0xF01D))

    def cross_predict(stage: int, rows_of) -> list[np.ndarray]:
        """Out-of-fold predictions per page for the given stage inputs."""
        out: list[np.ndarray | None] = [None] * n_pages
        if n_folds < 2:
            # Degenerate corpus: fall back to in-sample predictions.
            ens = _train_ensemble(
                *_stack(list(enumerate(pages)), rows_of), n_classes, weights, config, stage, n_folds
            )
            for i, p in enumerate(pages):
                out[i] = _votes_to_labels(ens.vote_counts(rows_of(i, p), n_classes))
            return out
        for f in range(n_folds):
            fold_train = [(i, p) for i, p in enumerate(pages) if folds[i] != f]
            X, y = _stack(fold_train, rows_of)
            ens = _train_ensemble(X, y, n_classes, weights, config, stage, f)
            for i, p in enumerate(pages):
                if folds[i] == f:
                    out[i] = _votes_to_labels(ens.vote_counts(rows_of(i, p), n_classes))
        return out

    final_fold = n_folds  # fold id reserved for the shipped ensembles
    stages: list[_Ensemble] = []
    base_rows = lambda i, p: p.X  # noqa: E731
    X0, y0 = _stack(list(enumerate(pages)), base_rows)
    stages.append(_train_ensemble(X0, y0, n_classes, weights, config, 0, final_fold))

    cp = None
    rows_prev = base_rows
    for s in range(1, config.n_refinement_stages + 1):
        cp = cross_predict(s - 1, rows_prev)

        def rows_aug(i, p, _cp=cp):
            return augment_with_neighbor_labels(p.X, p.neighbors, _cp[i], n_classes)

        Xs, ys = _stack(list(enumerate(pages)), rows_aug)
        stages.append(_train_ensemble(Xs, ys, n_classes, weights, config, s, final_fold))
        rows_prev = rows_aug

    n_cells = sum(len(p.y) for p in pages)
    return RandomForestModel(
        label_set=label_set,
        config=config,
        stages=stages,
        metadata={"n_training_pages": n_pages, "n_training_cells": n_cells},
    )
