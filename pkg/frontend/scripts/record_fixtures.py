"""Record golden wire-format fixtures from the live annotation service.

Spins up the real service in-process, walks one document through the
fresh-annotate -> train -> correct cycle, and captures the raw response
bytes plus the canonical encodings of the posted records. The frontend
tests replay these files to prove the TypeScript validators and the
canonical serializer agree byte for byte with the service.

Run from the repository root (the service package must be installed):

    python3 frontend/scripts/record_fixtures.py

Regeneration changes doc ids (PDF bytes are not stable across runs);
the fixtures are committed so tests never need the Python side.
"""

import argparse
import json
import sys
import tempfile
import time
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO_ROOT / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from ccs.service.annotations import AnnotationRecord  # noqa: E402
from ccs.service.app import create_app  # noqa: E402
from pdf_fixtures import multipage_pdf  # noqa: E402


def wait(client: TestClient, task_id: str, timeout: float = 120.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        payload = client.get(f"/tasks/{task_id}").json()
        if payload["chain_state"] in ("succeeded", "failed"):
            assert payload["chain_state"] == "succeeded", payload
            return payload
        time.sleep(0.02)
    raise RuntimeError(f"task {task_id} did not finish")


def post_record(client: TestClient, record: AnnotationRecord) -> dict:
    response = client.post(
        f"/documents/{record.doc_id}/pages/{record.page_number}/annotation",
        content=record.to_bytes(),
        headers={"content-type": "application/json"},
    )
    assert response.status_code == 201, response.text
    return response.json()


def record_fixture(record: AnnotationRecord) -> dict:
    return {"record": record.to_dict(), "canonical": record.to_bytes().decode("utf-8")}


def mixed_labels(page: dict) -> dict[int, str]:
    """Title on the first cell, text elsewhere, so training sees 2 classes."""
    labels = {}
    for i, cell in enumerate(page["cells"]):
        labels[cell["id"]] = "title" if i == 0 else "text"
    return labels


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out",
        type=Path,
        default=REPO_ROOT / "frontend" / "tests" / "fixtures",
        help="fixture directory (default: frontend/tests/fixtures)",
    )
    args = parser.parse_args()
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def save_raw(name: str, data: bytes) -> None:
        (out / name).write_bytes(data)
        written.append(name)

    def save_json(name: str, payload: dict) -> None:
        (out / name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        written.append(name)

    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(tmp, embedded_workers=2)
        with TestClient(app) as client:
            created = client.post("/collections", json={"name": "fixtures"})
            assert created.status_code == 201, created.text
            collection_id = created.json()["collection_id"]

            uploaded = client.post(
                f"/collections/{collection_id}/documents",
                content=multipage_pdf(2, 6),
                headers={"content-type": "application/pdf"},
            )
            assert uploaded.status_code == 202, uploaded.text
            doc_id = uploaded.json()["doc_id"]
            wait(client, uploaded.json()["task_id"])

            fresh_page = client.get(f"/documents/{doc_id}/pages/1")
            assert fresh_page.status_code == 200, fresh_page.text
            save_raw("page-fresh.json", fresh_page.content)

            fresh = AnnotationRecord(
                doc_id=doc_id,
                page_number=1,
                labels=mixed_labels(fresh_page.json()),
                annotator="alice",
                started=100.0,
                submitted=130.5,
            )
            submit_body = post_record(client, fresh)
            save_json("record-fresh.json", record_fixture(fresh))
            save_json("submit-response.json", {"status": 201, "body": submit_body})

            page2 = client.get(f"/documents/{doc_id}/pages/2").json()
            post_record(
                client,
                AnnotationRecord(
                    doc_id=doc_id,
                    page_number=2,
                    labels=mixed_labels(page2),
                    annotator="alice",
                    started=140.0,
                    submitted=171.0,
                ),
            )

            trained = client.post(
                f"/collections/{collection_id}/models",
                json={"config": {"n_trees": 10, "min_leaf": 1, "n_refinement_stages": 1}},
            )
            assert trained.status_code == 202, trained.text
            wait(client, trained.json()["task_id"])

            corr_page = client.get(f"/documents/{doc_id}/pages/1")
            assert corr_page.status_code == 200, corr_page.text
            payload = corr_page.json()
            assert payload["mode"] == "correction", payload["mode"]
            save_raw("page-correction.json", corr_page.content)

            predicted = {
                cell["id"]: payload["predictions"]["labels"][i]
                for i, cell in enumerate(payload["cells"])
            }
            corrected_labels = dict(predicted)
            flipped = sorted(corrected_labels)[:2]
            for cell_id in flipped:
                corrected_labels[cell_id] = "caption"
            corrected = AnnotationRecord(
                doc_id=doc_id,
                page_number=1,
                labels=corrected_labels,
                annotator="alice",
                started=200.0,
                submitted=236.25,
                source="corrected-from-prediction",
                corrections_count=sum(
                    1 for cid, lab in corrected_labels.items() if predicted[cid] != lab
                ),
            )
            post_record(client, corrected)
            save_json("record-corrected.json", record_fixture(corrected))

            stats = client.get(f"/collections/{collection_id}/session-stats")
            assert stats.status_code == 200, stats.text
            save_raw("session-stats.json", stats.content)

            missing = client.get(f"/documents/{doc_id}/pages/99")
            assert missing.status_code == 404
            save_json("error-404.json", {"status": 404, "body": missing.json()})

            bad = dict(fresh.to_dict())
            bad_labels = dict(bad["labels"])
            first = sorted(bad_labels, key=int)[0]
            bad_labels[first] = "banana"
            second = sorted(bad_labels, key=int)[1]
            del bad_labels[second]
            bad["labels"] = bad_labels
            rejected = client.post(
                f"/documents/{doc_id}/pages/1/annotation", json=bad
            )
            assert rejected.status_code == 422, rejected.text
            save_json("error-422.json", {"status": 422, "body": rejected.json()})

    for name in sorted(written):
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main()
