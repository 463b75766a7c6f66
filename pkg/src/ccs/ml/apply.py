"""Document-level model application and manifest-driven training.

The per-page classifier lives in forest.py; this module wraps it in the
two wire formats the pipeline moves around: ``doc-labels.v1`` (one label
and confidence per cell for a whole document) and
``training-manifest.v1`` (which pages of which parsed documents to train
on, with their ground-truth labels).
"""

from __future__ import annotations

import json
from typing import Callable, Mapping, Sequence

from ..errors import SchemaViolationError
from ..model.serialize import (
    _Walker,
    canonical_json_bytes,
    label_set_from_list,
    label_set_to_list,
)
from ..model.types import LabelSet, ParsedDocument
from .forest import RandomForestModel, TrainConfig, train_forest

DOC_LABELS_FORMAT = "doc-labels.v1"
TRAINING_MANIFEST_FORMAT = "training-manifest.v1"


# ------------------------------------------------------------- doc labels


def predict_document(doc: ParsedDocument, model: RandomForestModel) -> dict:
    """Run the model on every page; labels follow cell-id order."""
    pages = []
    for page in doc.pages:
        result = model.predict(page)
        pages.append(
            {
                "page_number": page.geometry.page_number,
                "labels": list(result.labels),
                "confidences": list(result.confidences),
            }
        )
    return {
        "format": DOC_LABELS_FORMAT,
        "schema_version": 1,
        "doc_id": doc.doc_id,
        "pages": pages,
    }


def doc_labels_to_bytes(payload: dict) -> bytes:
    return canonical_json_bytes(payload)


def doc_labels_from_bytes(data: bytes) -> dict:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"$: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        _Walker.fail("$", "expected an object")
    if raw.get("format") != DOC_LABELS_FORMAT:
        _Walker.fail("$.format", f"expected {DOC_LABELS_FORMAT!r}, got {raw.get('format')!r}")
    if raw.get("schema_version") != 1:
        _Walker.fail("$.schema_version", f"unsupported version {raw.get('schema_version')!r}")
    doc_id = _Walker.get(raw, "doc_id", str, "$")
    pages = _Walker.get(raw, "pages", list, "$")
    out_pages = []
    for i, page in enumerate(pages):
        path = f"$.pages[{i}]"
        if not isinstance(page, dict):
            _Walker.fail(path, "expected an object")
        number = _Walker.get(page, "page_number", int, path)
        labels = _Walker.get(page, "labels", list, path)
        confs = _Walker.get(page, "confidences", list, path)
        if len(labels) != len(confs):
            _Walker.fail(path, f"{len(labels)} labels but {len(confs)} confidences")
        for j, item in enumerate(labels):
            if not isinstance(item, str):
                _Walker.fail(f"{path}.labels[{j}]", "expected a string")
        for j, item in enumerate(confs):
            if not isinstance(item, (int, float)) or isinstance(item, bool):
                _Walker.fail(f"{path}.confidences[{j}]", "expected a number")
            if not 0.0 <= float(item) <= 1.0:
                _Walker.fail(f"{path}.confidences[{j}]", f"confidence {item} outside [0, 1]")
        out_pages.append(
            {
                "page_number": number,
                "labels": [str(s) for s in labels],
                "confidences": [float(c) for c in confs],
            }
        )
    return {
        "format": DOC_LABELS_FORMAT,
        "schema_version": 1,
        "doc_id": doc_id,
        "pages": out_pages,
    }


def page_labels_of(payload: dict) -> dict[int, list[str]]:
    """Shape a doc-labels payload for assemble()."""
    return {page["page_number"]: list(page["labels"]) for page in payload["pages"]}


# -------------------------------------------------------------- manifests


def build_training_manifest(
    label_set: LabelSet,
    pages: Sequence[tuple[str, int, Sequence[str]]],
    config: TrainConfig | None = None,
) -> bytes:
    """pages = (parsed_key, page_number, labels) triples."""
    return canonical_json_bytes(
        {
            "format": TRAINING_MANIFEST_FORMAT,
            "schema_version": 1,
            "label_set": label_set_to_list(label_set),
            "config": (config or TrainConfig()).to_dict(),
            "pages": [
                {
                    "parsed_key": key,
                    "page_number": number,
                    "labels": list(labels),
                }
                for key, number, labels in pages
            ],
        }
    )


def manifest_from_bytes(data: bytes) -> dict:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"$: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        _Walker.fail("$", "expected an object")
    if raw.get("format") != TRAINING_MANIFEST_FORMAT:
        _Walker.fail(
            "$.format", f"expected {TRAINING_MANIFEST_FORMAT!r}, got {raw.get('format')!r}"
        )
    if raw.get("schema_version") != 1:
        _Walker.fail("$.schema_version", f"unsupported version {raw.get('schema_version')!r}")
    label_set = label_set_from_list(_Walker.get(raw, "label_set", list, "$"))
    config = TrainConfig.from_dict(_Walker.get(raw, "config", dict, "$"))
    pages = []
    for i, page in enumerate(_Walker.get(raw, "pages", list, "$")):
        path = f"$.pages[{i}]"
        if not isinstance(page, dict):
            _Walker.fail(path, "expected an object")
        pages.append(
            {
                "parsed_key": _Walker.get(page, "parsed_key", str, path),
                "page_number": _Walker.get(page, "page_number", int, path),
                "labels": [str(s) for s in _Walker.get(page, "labels", list, path)],
            }
        )
    return {"label_set": label_set, "config": config, "pages": pages}


def train_from_manifest(
    manifest: Mapping,
    fetch: Callable[[str], bytes],
    deserialize: Callable[[bytes], ParsedDocument],
) -> RandomForestModel:
    """Resolve manifest page refs through ``fetch`` and train.

    Parsed documents are fetched once each; a page entry referencing a
    page number the document does not have is a schema violation.
    """
    docs: dict[str, ParsedDocument] = {}
    annotated = []
    for entry in manifest["pages"]:
        key = entry["parsed_key"]
        if key not in docs:
            docs[key] = deserialize(fetch(key))
        doc = docs[key]
        by_number = {p.geometry.page_number: p for p in doc.pages}
        page = by_number.get(entry["page_number"])
        if page is None:
            raise SchemaViolationError(
                f"$.pages: document {key[:12]} has no page {entry['page_number']}"
            )
        annotated.append((page, entry["labels"]))
    return train_forest(annotated, manifest["label_set"], manifest["config"])
