"""Command-line entry points for the pipeline, workers, and service."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .assemble import assemble
from .detect import detections_from_bytes, sweep_confidence
from .errors import CcsError
from .ml.apply import (
    doc_labels_from_bytes,
    doc_labels_to_bytes,
    predict_document,
)
from .ml.forest import RandomForestModel, TrainConfig, train_forest
from .model.serialize import deserialize, serialize
from .model.types import DEFAULT_LABELS
from .orchestration import (
    FileBroker,
    FileStatusStore,
    Orchestrator,
    bench_scaling,
    read_corpus,
    rows_to_csv,
)
from .parser import parse_document
from .parser.normalize import NormalizationConfig
from .service.index import MetadataIndex
from .service.store import ObjectStore


def _write(output: str, data: bytes) -> None:
    if output == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(output).write_bytes(data)


def _fail(exc: CcsError) -> None:
    raise click.ClickException(f"[{exc.code}] {exc}")


@click.group()
def main():
    """Document ingestion: parse, label, assemble, serve."""


@main.command("parse")
@click.argument("pdf", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="-", show_default=True)
def parse_cmd(pdf, config_path, output):
    """Extract text cells from PDF and emit parsed-document.v1 JSON."""
    config = None
    if config_path:
        raw = json.loads(Path(config_path).read_text())
        known = {k: raw[k] for k in raw if k in NormalizationConfig.__dataclass_fields__}
        if "list_marker_patterns" in known:
            known["list_marker_patterns"] = tuple(known["list_marker_patterns"])
        config = NormalizationConfig(**known)
    data = Path(pdf).read_bytes()
    try:
        doc = parse_document(data, config, source_name=Path(pdf).name)
    except CcsError as exc:
        _fail(exc)
    _write(output, serialize(doc))


@main.command("train")
@click.option("--annotations", "annotations_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="model.json", show_default=True)
def train_cmd(annotations_dir, config_path, output):
    """Train a forest from <stem>.parsed.json / <stem>.labels.json pairs."""
    config = TrainConfig()
    if config_path:
        config = TrainConfig.from_dict(json.loads(Path(config_path).read_text()))
    pages = []
    parsed_files = sorted(Path(annotations_dir).glob("*.parsed.json"))
    if not parsed_files:
        raise click.ClickException(f"no *.parsed.json files in {annotations_dir}")
    for parsed_path in parsed_files:
        labels_path = parsed_path.with_name(
            parsed_path.name.replace(".parsed.json", ".labels.json")
        )
        if not labels_path.exists():
            raise click.ClickException(f"{parsed_path.name} has no matching .labels.json")
        try:
            doc = deserialize(parsed_path.read_bytes())
            payload = doc_labels_from_bytes(labels_path.read_bytes())
            for page in payload["pages"]:
                pages.append((doc.page(page["page_number"]), page["labels"]))
        except CcsError as exc:
            _fail(exc)
    try:
        model = train_forest(pages, DEFAULT_LABELS, config)
    except CcsError as exc:
        _fail(exc)
    _write(output, model.to_bytes())
    click.echo(f"trained on {len(pages)} pages -> {output}", err=True)


@main.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--doc", "doc_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--output", default="-", show_default=True)
def predict_cmd(model_path, doc_path, output):
    """Label every cell of a parsed document; emits doc-labels.v1."""
    try:
        model = RandomForestModel.from_dict(json.loads(Path(model_path).read_text()))
        doc = deserialize(Path(doc_path).read_bytes())
        payload = predict_document(doc, model)
    except CcsError as exc:
        _fail(exc)
    _write(output, doc_labels_to_bytes(payload))


@main.command("assemble")
@click.option("--doc", "doc_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", type=click.Path(exists=True))
@click.option("-o", "--output", default="-", show_default=True)
def assemble_cmd(doc_path, labels_path, output):
    """Build structured-document.v1 from a parsed document and labels."""
    try:
        doc = deserialize(Path(doc_path).read_bytes())
        page_labels = None
        if labels_path:
            payload = doc_labels_from_bytes(Path(labels_path).read_bytes())
            page_labels = {p["page_number"]: p["labels"] for p in payload["pages"]}
        structured = assemble(doc, page_labels)
    except CcsError as exc:
        _fail(exc)
    _write(output, serialize(structured))


@main.command("detect-eval")
@click.option("--doc", "doc_path", required=True, type=click.Path(exists=True))
@click.option("--detections", "det_path", required=True, type=click.Path(exists=True))
@click.option("--truth", "truth_path", required=True, type=click.Path(exists=True))
@click.option("--target-label", default="table", show_default=True)
def detect_eval_cmd(doc_path, det_path, truth_path, target_label):
    """Sweep detection confidence thresholds against cell-level truth."""
    try:
        doc = deserialize(Path(doc_path).read_bytes())
        detections = detections_from_bytes(Path(det_path).read_bytes())
        truth = doc_labels_from_bytes(Path(truth_path).read_bytes())
    except CcsError as exc:
        _fail(exc)
    truth_by_page = {
        p["page_number"]: [lbl == target_label for lbl in p["labels"]] for p in truth["pages"]
    }
    click.echo("page  threshold  precision  recall  f1")
    for page in doc.pages:
        n = page.geometry.page_number
        if not page.cells or n not in truth_by_page:
            continue
        try:
            result = sweep_confidence(detections.get(n, []), truth_by_page[n], list(page.cells))
        except CcsError as exc:
            _fail(exc)
        for pt in result.points:
            click.echo(
                f"{n:<5d} {pt.threshold:<10.3f} {pt.precision:<10.3f} "
                f"{pt.recall:<7.3f} {pt.f1:.3f}"
            )
        click.echo(f"best: page {n} threshold {result.best_threshold:.3f} "
                   f"f1 {result.best_f1:.3f}")


def _parse_queue_config(spec: str) -> dict[str, int]:
    config = {}
    for part in spec.split(","):
        name, _, count = part.partition("=")
        if not name or not count.isdigit():
            raise click.ClickException(f"bad queue spec {part!r}; expected name=count")
        config[name.strip()] = int(count)
    return config


@main.command("work")
@click.option("--queues", default="parse=1,ml=1,assemble=1,train=1,detect=1", show_default=True)
@click.option("--data", "data_dir", default="./ccs-data", show_default=True)
@click.option("--stall-timeout", default=60.0, show_default=True)
def work_cmd(queues, data_dir, stall_timeout):
    """Drain queued tasks from a data directory with per-queue workers."""
    data = Path(data_dir)
    orch = Orchestrator(
        ObjectStore(data / "objects"),
        broker=FileBroker(data / "queues"),
        statuses=FileStatusStore(data / "statuses"),
        index=MetadataIndex(data / "index.sqlite"),
    )
    report = orch.run_workers(_parse_queue_config(queues), stall_timeout=stall_timeout)
    click.echo(json.dumps(report, sort_keys=True))


@main.command("bench")
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--workers", default="1,2,4,8", show_default=True)
@click.option("-o", "--output", default="bench.csv", show_default=True)
@click.option("--work-dir", default=None, help="Scratch directory (default: temp)")
def bench_cmd(corpus_dir, workers, output, work_dir):
    """Measure stage wall-clock and speedup across worker counts."""
    import tempfile

    counts = [int(w) for w in workers.split(",") if w.strip()]
    corpus = read_corpus(corpus_dir)
    click.echo(f"benching {len(corpus)} documents at worker counts {counts}", err=True)
    if work_dir is None:
        with tempfile.TemporaryDirectory(prefix="ccs-bench-") as tmp:
            rows = bench_scaling(corpus, counts, tmp)
    else:
        rows = bench_scaling(corpus, counts, work_dir)
    csv = rows_to_csv(rows)
    _write(output, csv.encode())
    click.echo(csv, nl=False)


@main.command("serve")
@click.option("--port", default=None, type=int, help="Default: $CCS_PORT or 8000")
@click.option("--data", "data_dir", default=None, help="Default: $CCS_DATA_DIR or ./ccs-data")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--workers", "embedded_workers", default=2, show_default=True,
              help="Embedded task worker threads")
def serve_cmd(port, data_dir, host, embedded_workers):
    """Run the REST service with embedded task workers."""
    import uvicorn

    from .service.app import create_app

    port = port or int(os.environ.get("CCS_PORT", "8000"))
    app = create_app(data_dir, embedded_workers=embedded_workers)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
