"""REST layer over the object store, metadata index, and orchestrator.

Uploads, training, and conversions run as background tasks drained by
embedded worker threads; reads are pure functions of stored state.
Content addressing does the deduplication: a duplicate upload is
detected by its bytes hashing to an already-indexed document key.
"""

from __future__ import annotations

import json
import os
import threading
import time
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response

from ..errors import CcsError, SchemaViolationError
from ..ml.apply import build_training_manifest
from ..ml.forest import RandomForestModel, TrainConfig
from ..model.serialize import canonical_json_bytes, deserialize
from ..model.types import DEFAULT_LABELS, LabelSet, ParsedDocument, ParsedPage
from ..orchestration import Orchestrator
from .annotations import (
    AnnotationRecord,
    annotation_from_dict,
    compute_session_stats,
    coverage_violations,
)
from .index import MetadataIndex, MetadataRecord
from .store import ObjectStore

PAGE_VIEW_FORMAT = "page-annotation.v1"


class ServiceState:
    """Shared handles plus the embedded worker pool."""

    def __init__(self, data_dir: str | Path, embedded_workers: int = 2):
        self.data_dir = Path(data_dir)
        self.store = ObjectStore(self.data_dir / "objects")
        self.index = MetadataIndex(self.data_dir / "index.sqlite")
        self.orchestrator = Orchestrator(self.store, index=self.index, retry_backoff=0.05)
        self.label_set: LabelSet = DEFAULT_LABELS
        self.embedded_workers = embedded_workers
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        for _ in range(self.embedded_workers):
            t = threading.Thread(target=self._worker_loop, daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout=5.0)
        self.index.close()

    def _worker_loop(self) -> None:
        orch = self.orchestrator
        queues = orch.queue_names()
        while not self._stop.is_set():
            msg = orch.broker.claim(queues)
            if msg is None:
                time.sleep(0.005)
                continue
            orch.process(msg)
            orch.broker.ack(msg)

    # ------------------------------------------------------------ lookups

    def collection_or_404(self, collection_id: str) -> dict:
        record = self.index.get(collection_id, collection_id, "collection")
        if record is None:
            raise HTTPException(404, f"no collection {collection_id}")
        return json.loads(self.store.get(collection_id))

    def parsed_doc_or_404(self, doc_id: str) -> tuple[ParsedDocument, MetadataRecord]:
        for record in self.index.query(kind="parsed"):
            if record.attrs.get("doc_id") == doc_id:
                return deserialize(self.store.get(record.key)), record
        raise HTTPException(404, f"no parsed document {doc_id}")

    def page_or_404(self, doc: ParsedDocument, page_number: int) -> ParsedPage:
        try:
            return doc.page(page_number)
        except KeyError:
            raise HTTPException(404, f"document has no page {page_number}") from None

    def latest_model(self, collection_id: str) -> tuple[str, RandomForestModel] | None:
        records = self.index.query(collection=collection_id, kind="model")
        if not records:
            return None
        key = max(records, key=lambda r: (self.store.meta(r.key)["created"], r.key)).key
        return key, RandomForestModel.from_dict(json.loads(self.store.get(key)))

    def annotations_for(self, collection_id: str) -> list[tuple[MetadataRecord, AnnotationRecord]]:
        out = []
        for record in self.index.query(collection=collection_id, kind="annotation"):
            out.append((record, annotation_from_dict(json.loads(self.store.get(record.key)))))
        return out

    def current_annotations(self, collection_id: str) -> dict[tuple[str, int], AnnotationRecord]:
        """Latest annotation per (doc, page); resubmission wins by time."""
        current: dict[tuple[str, int], AnnotationRecord] = {}
        for _, ann in self.annotations_for(collection_id):
            at = (ann.doc_id, ann.page_number)
            if at not in current or ann.submitted >= current[at].submitted:
                current[at] = ann
        return current


def create_app(data_dir: str | Path | None = None, embedded_workers: int = 2) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("CCS_DATA_DIR", "./ccs-data"))
    state = ServiceState(data_dir, embedded_workers=embedded_workers)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state.start()
        yield
        state.stop()

    app = FastAPI(title="ccs", version="1.0", lifespan=lifespan)
    app.state.ccs = state

    @app.exception_handler(SchemaViolationError)
    async def schema_violation(request: Request, exc: SchemaViolationError):
        return Response(
            canonical_json_bytes({"detail": str(exc)}), 422, media_type="application/json"
        )

    @app.exception_handler(CcsError)
    async def ccs_error(request: Request, exc: CcsError):
        return Response(
            canonical_json_bytes({"detail": str(exc), "code": exc.code}),
            400,
            media_type="application/json",
        )

    # ------------------------------------------------------- collections

    @app.post("/collections", status_code=201)
    def create_collection(body: dict):
        name = body.get("name")
        if not isinstance(name, str) or not name:
            raise SchemaViolationError("expected a non-empty name", path="$.name")
        payload = canonical_json_bytes({"collection": name})
        key = state.store.put(payload, media_type="application/json")
        state.index.put(
            MetadataRecord(
                key=key, collection=key, kind="collection", status="active",
                attrs={"name": name},
            )
        )
        return {"collection_id": key, "name": name}

    @app.get("/collections")
    def list_collections():
        return {
            "collections": [
                {"collection_id": r.key, "name": r.attrs.get("name", "")}
                for r in state.index.query(kind="collection")
            ]
        }

    @app.get("/collections/{collection_id}")
    def get_collection(collection_id: str):
        info = state.collection_or_404(collection_id)
        docs = state.index.query(collection=collection_id, kind="pdf")
        models = state.index.query(collection=collection_id, kind="model")
        return {
            "collection_id": collection_id,
            "name": info["collection"],
            "documents": [{"doc_id": r.key, "status": r.status} for r in docs],
            "models": [r.key for r in models],
        }

    # --------------------------------------------------------- documents

    @app.post("/collections/{collection_id}/documents", status_code=202)
    async def upload_document(collection_id: str, request: Request):
        state.collection_or_404(collection_id)
        data = await request.body()
        if not data:
            raise SchemaViolationError("empty upload body", path="$")
        doc_id = state.store.key_of(data)
        if state.index.get(doc_id, collection_id, "pdf") is not None:
            return Response(
                canonical_json_bytes({"doc_id": doc_id, "detail": "document already uploaded"}),
                409,
                media_type="application/json",
            )
        state.store.put(data, media_type="application/pdf")
        state.index.put(
            MetadataRecord(
                key=doc_id, collection=collection_id, kind="pdf", status="uploaded",
                attrs={"size": len(data)},
            )
        )
        task_id = state.orchestrator.submit(
            "parse", {"pdf": doc_id}, {"collection": collection_id, "doc_id": doc_id}
        )
        return {"doc_id": doc_id, "task_id": task_id}

    @app.get("/documents/{doc_id}/pages/{page_number}")
    def get_page(doc_id: str, page_number: int):
        doc, record = state.parsed_doc_or_404(doc_id)
        page = state.page_or_404(doc, page_number)
        collection = record.collection
        found = state.latest_model(collection)
        predictions = None
        mode = "fresh"
        if found is not None:
            model_key, model = found
            result = model.predict(page)
            predictions = {
                "model_id": model_key,
                "labels": list(result.labels),
                "confidences": list(result.confidences),
            }
            mode = "correction"
        return {
            "format": PAGE_VIEW_FORMAT,
            "schema_version": 1,
            "doc_id": doc_id,
            "collection_id": collection,
            "page_number": page_number,
            "n_pages": len(doc.pages),
            "geometry": {
                "width": page.geometry.width,
                "height": page.geometry.height,
            },
            "cells": [
                {
                    "id": c.id,
                    "bbox": [c.bbox.x0, c.bbox.y0, c.bbox.x1, c.bbox.y1],
                    "text": c.text,
                    "font_size": c.style.font_size,
                }
                for c in page.cells
            ],
            "predictions": predictions,
            "mode": mode,
            "label_set": [
                {"name": l.name, "color": l.color} for l in state.label_set.labels
            ],
        }

    @app.post("/documents/{doc_id}/pages/{page_number}/annotation", status_code=201)
    def post_annotation(doc_id: str, page_number: int, body: dict):
        doc, record = state.parsed_doc_or_404(doc_id)
        page = state.page_or_404(doc, page_number)
        ann = annotation_from_dict(body)
        if ann.doc_id != doc_id or ann.page_number != page_number:
            raise SchemaViolationError(
                f"record addresses {ann.doc_id[:12]} page {ann.page_number}, "
                f"posted to {doc_id[:12]} page {page_number}",
                path="$.doc_id",
            )
        problems = coverage_violations(ann, page)
        known = set(state.label_set.names())
        for cell_id, label in sorted(ann.labels.items()):
            if label not in known:
                problems.append(f"cell {cell_id} has unknown label {label!r}")
        if problems:
            raise SchemaViolationError("; ".join(problems), path="$.labels")
        key = state.store.put(ann.to_bytes(), media_type="application/json")
        state.index.put(
            MetadataRecord(
                key=key, collection=record.collection, kind="annotation", status="submitted",
                attrs={
                    "doc_id": doc_id,
                    "page_number": page_number,
                    "annotator": ann.annotator,
                    "submitted": ann.submitted,
                    "source": ann.source,
                },
            )
        )
        return {"annotation_key": key, "corrections_count": ann.corrections_count}

    # ------------------------------------------------------------ models

    @app.post("/collections/{collection_id}/models", status_code=202)
    def train_model(collection_id: str, body: dict | None = None):
        state.collection_or_404(collection_id)
        config = TrainConfig.from_dict((body or {}).get("config") or {})
        current = state.current_annotations(collection_id)
        if not current:
            raise HTTPException(404, f"collection {collection_id} has no annotations")
        pages = []
        for (doc_id, page_number), ann in sorted(current.items()):
            doc, record = state.parsed_doc_or_404(doc_id)
            page = state.page_or_404(doc, page_number)
            labels = [ann.labels[c.id] for c in page.cells]
            pages.append((record.key, page_number, labels))
        manifest = build_training_manifest(state.label_set, pages, config)
        manifest_key = state.store.put(manifest, media_type="application/json")
        task_id = state.orchestrator.submit(
            "train", {"manifest": manifest_key}, {"collection": collection_id}
        )
        return {"task_id": task_id}

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        try:
            raw = json.loads(state.store.get(model_id))
        except KeyError:
            raise HTTPException(404, f"no model {model_id}") from None
        if raw.get("format") != "rf-model.v1":
            raise HTTPException(404, f"{model_id} is not a model")
        return {
            "model_id": model_id,
            "metrics": raw.get("metadata", {}).get("metrics"),
            "trained_pages": raw.get("metadata", {}).get("trained_pages"),
            "config": raw.get("config"),
            "label_set": raw.get("label_set"),
            "download": f"/models/{model_id}/download",
        }

    @app.get("/models/{model_id}/download")
    def download_model(model_id: str):
        try:
            data = state.store.get(model_id)
        except KeyError:
            raise HTTPException(404, f"no model {model_id}") from None
        return Response(data, media_type="application/json")

    # ------------------------------------------------------- conversions

    @app.post("/documents/{doc_id}/convert", status_code=202)
    def convert_document(doc_id: str, model: str):
        doc, record = state.parsed_doc_or_404(doc_id)
        if not state.store.exists(model):
            raise HTTPException(404, f"no model {model}")
        params = {"collection": record.collection, "doc_id": doc_id, "model_id": model}
        task_id = state.orchestrator.chain(
            "predict",
            {"parsed": record.key, "model": model},
            then={
                "operation": "assemble",
                "input_key": "labels",
                "inputs": {"parsed": record.key},
                "params": params,
            },
            params=params,
        )
        return {"task_id": task_id}

    @app.get("/documents/{doc_id}/structured")
    def get_structured(doc_id: str, model: str | None = None):
        for record in state.index.query(kind="structured"):
            if record.attrs.get("doc_id") != doc_id:
                continue
            if model is not None and record.attrs.get("model_id") != model:
                continue
            return Response(state.store.get(record.key), media_type="application/json")
        raise HTTPException(404, f"no structured output for {doc_id}")

    # ------------------------------------------------------------- tasks

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        status = state.orchestrator.status(task_id)
        if status is None:
            raise HTTPException(404, f"no task {task_id}")
        tail = state.orchestrator.chain_status(task_id)
        out = status.to_dict()
        out["chain_state"] = tail.state
        out["chain_result"] = tail.result
        return out

    # ------------------------------------------------------------- stats

    @app.get("/collections/{collection_id}/session-stats")
    def session_stats(collection_id: str, annotator: str | None = None):
        state.collection_or_404(collection_id)
        records = [
            ann
            for _, ann in state.annotations_for(collection_id)
            if annotator is None or ann.annotator == annotator
        ]
        records.sort(key=lambda a: a.submitted)
        retrains = sorted(
            state.store.meta(r.key)["created"]
            for r in state.index.query(collection=collection_id, kind="model")
        )
        return compute_session_stats(records, retrains).to_dict()

    return app
