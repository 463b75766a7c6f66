"""Every wire format validates against its JSON Schema in docs/schemas/.

Artifacts are produced by the real serializers, never hand-written, so
these tests catch schema drift in either direction.
"""

import json
import time
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from ccs.assemble import assemble
from ccs.detect import Detection, detections_to_bytes
from ccs.ml import TrainConfig, train_forest
from ccs.ml.apply import build_training_manifest, doc_labels_to_bytes, predict_document
from ccs.model import BBox, PathSegment
from ccs.model.serialize import serialize
from ccs.model.types import DEFAULT_LABELS
from ccs.parser import FontInfo, PageExtract, RawSnippet, parse_document, raw_snippets_to_bytes
from ccs.parser.snippets import PageGeometry
from ccs.service import AnnotationRecord

from pdf_fixtures import hello_pdf, table_pdf
from synth import make_corpus

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "docs" / "schemas"
DOCS_DIR = SCHEMA_DIR.parent


@pytest.fixture(scope="module")
def registry():
    resources = [
        (p.name, Resource.from_contents(json.loads(p.read_text())))
        for p in SCHEMA_DIR.glob("*.json")
    ]
    return Registry().with_resources(resources)


def check(payload, schema_name, registry):
    schema = json.loads((SCHEMA_DIR / schema_name).read_text())
    validator = Draft202012Validator(schema, registry=registry)
    errors = sorted(validator.iter_errors(payload), key=lambda e: e.json_path)
    assert not errors, "\n".join(f"{e.json_path}: {e.message}" for e in errors[:5])


@pytest.fixture(scope="module")
def parsed_table():
    return parse_document(table_pdf(), source_name="table.pdf")


@pytest.fixture(scope="module")
def small_model():
    corpus = make_corpus("alpha", 20, seed=7)
    return train_forest(corpus, DEFAULT_LABELS, TrainConfig(n_trees=5, n_refinement_stages=1))


def test_all_schemas_are_valid_2020_12(registry):
    for path in sorted(SCHEMA_DIR.glob("*.json")):
        schema = json.loads(path.read_text())
        Draft202012Validator.check_schema(schema)
        assert schema.get("$id") == path.name


def test_parsed_document_schema(parsed_table, registry):
    check(json.loads(serialize(parsed_table)), "parsed-document.v1.json", registry)


def test_structured_document_schema(parsed_table, registry):
    labels = {
        p.geometry.page_number: ["table"] * len(p.cells) for p in parsed_table.pages
    }
    structured = assemble(parsed_table, page_labels=labels)
    check(json.loads(serialize(structured)), "structured-document.v1.json", registry)


def test_raw_snippets_schema(registry):
    page = PageExtract(
        geometry=PageGeometry(page_number=1, width=612.0, height=792.0),
        snippets=(
            RawSnippet(
                bbox=BBox(72.0, 700.0, 180.0, 712.0),
                text="Hello",
                font=FontInfo(name="Times-Bold", size=12.0, bold=True),
                baseline_y=702.5,
            ),
        ),
        paths=(PathSegment((72.0, 690.0), (540.0, 690.0)),),
        image_refs=("img-0",),
    )
    data = raw_snippets_to_bytes([page], source_name="hello.pdf")
    check(json.loads(data), "raw-snippets.v1.json", registry)


def test_detections_schema(registry):
    data = detections_to_bytes(
        {1: [Detection(bbox=BBox(10.0, 10.0, 50.0, 40.0), confidence=0.75)]}
    )
    check(json.loads(data), "detections.v1.json", registry)


def test_rf_model_schema(small_model, registry):
    check(json.loads(small_model.to_bytes()), "rf-model.v1.json", registry)


def test_doc_labels_schema(parsed_table, small_model, registry):
    payload = predict_document(parsed_table, small_model)
    check(json.loads(doc_labels_to_bytes(payload)), "doc-labels.v1.json", registry)


def test_training_manifest_schema(registry):
    data = build_training_manifest(
        DEFAULT_LABELS,
        [("c" * 64, 1, ["title", "text"]), ("c" * 64, 2, ["text"])],
        TrainConfig(n_trees=10),
    )
    check(json.loads(data), "training-manifest.v1.json", registry)


def test_annotation_record_schema(registry):
    fresh = AnnotationRecord(
        doc_id="a" * 64,
        page_number=1,
        labels={0: "title", 1: "text"},
        annotator="alice",
        started=100.0,
        submitted=130.0,
    )
    check(json.loads(fresh.to_bytes()), "annotation-record.v1.json", registry)
    corrected = AnnotationRecord(
        doc_id="a" * 64,
        page_number=2,
        labels={0: "text"},
        annotator="alice",
        started=200.0,
        submitted=210.0,
        source="corrected-from-prediction",
        corrections_count=1,
    )
    check(json.loads(corrected.to_bytes()), "annotation-record.v1.json", registry)


def test_annotation_record_schema_rejects_bad_source(registry):
    schema = json.loads((SCHEMA_DIR / "annotation-record.v1.json").read_text())
    validator = Draft202012Validator(schema, registry=registry)
    record = json.loads(
        AnnotationRecord(
            doc_id="a" * 64,
            page_number=1,
            labels={0: "text"},
            annotator="alice",
            started=1.0,
            submitted=2.0,
        ).to_bytes()
    )
    # fresh records must not carry a corrections count
    record["corrections_count"] = 3
    assert list(validator.iter_errors(record))


def test_page_annotation_schema(tmp_path, registry):
    fastapi = pytest.importorskip("fastapi")
    from fastapi.testclient import TestClient

    from ccs.service.app import create_app

    app = create_app(tmp_path / "data", embedded_workers=1)
    with TestClient(app) as client:
        coll = client.post("/collections", json={"name": "schemas"}).json()
        up = client.post(
            f"/collections/{coll['collection_id']}/documents",
            content=hello_pdf(),
            headers={"content-type": "application/pdf"},
        ).json()
        deadline = time.time() + 30
        while time.time() < deadline:
            status = client.get(f"/tasks/{up['task_id']}").json()
            if status["state"] in ("succeeded", "failed"):
                break
            time.sleep(0.02)
        assert status["state"] == "succeeded"
        view = client.get(f"/documents/{up['doc_id']}/pages/1").json()
    check(view, "page-annotation.v1.json", registry)


def test_openapi_document_matches_app(tmp_path):
    pytest.importorskip("fastapi")
    from ccs.service.app import create_app

    committed = json.loads((DOCS_DIR / "openapi.json").read_text())
    live = create_app(tmp_path / "data").openapi()
    assert committed["info"]["title"] == live["info"]["title"]
    for path, ops in live["paths"].items():
        assert path in committed["paths"], f"docs/openapi.json missing {path}"
        assert set(ops) == set(committed["paths"][path]), path
