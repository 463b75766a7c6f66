"""Scaling benchmark: wall-clock per pipeline stage vs worker count.

Parse and model application are page-granular in principle; the bench
realizes that by feeding single-page documents, so every stage reduces
to one task per document. Assembly is inherently document-granular, so
its speedup is bounded by the number of documents no matter how many
workers run.

Workers are separate processes coordinating through a FileBroker, so
the numbers reflect real parallelism rather than GIL-shared threads.
"""

from __future__ import annotations

import multiprocessing
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from ..ml.apply import build_training_manifest
from ..ml.forest import TrainConfig
from ..model.serialize import deserialize
from ..model.types import DEFAULT_LABELS
from ..service.store import ObjectStore
from .broker import FileBroker, FileStatusStore
from .tasks import Orchestrator

STAGES = ("parse", "ml-apply", "assemble")
_STAGE_QUEUE = {"parse": "parse", "ml-apply": "ml", "assemble": "assemble"}


@dataclass(frozen=True)
class BenchRow:
    stage: str
    workers: int
    seconds: float
    speedup: float

    def as_csv(self) -> str:
        return f"{self.stage},{self.workers},{self.seconds:.3f},{self.speedup:.2f}"


def worker_main(
    data_dir: str, broker_dir: str, status_dir: str, queues: list[str], backoff: float = 0.05
) -> None:
    """Entry point for one worker process; drains its queues and exits."""
    orch = Orchestrator(
        ObjectStore(data_dir),
        broker=FileBroker(broker_dir),
        statuses=FileStatusStore(status_dir),
        retry_backoff=backoff,
    )
    orch._drain_loop(
        queues,
        {"processed": 0, "succeeded": 0, "failed": 0, "retried": 0},
        threading.Lock(),
        {"last": time.time()},
        60.0,
    )


def read_corpus(corpus_dir: str | Path) -> list[bytes]:
    return [p.read_bytes() for p in sorted(Path(corpus_dir).glob("*.pdf"))]


def _run_stage(
    store_root: Path,
    work_dir: Path,
    stage: str,
    workers: int,
    submit_specs: list[tuple[str, dict]],
) -> float:
    """Submit the stage's tasks to a fresh run dir and drain with N processes."""
    run_dir = work_dir / f"run-{stage}-{workers}"
    broker_dir, status_dir = run_dir / "queues", run_dir / "statuses"
    orch = Orchestrator(
        ObjectStore(store_root),
        broker=FileBroker(broker_dir),
        statuses=FileStatusStore(status_dir),
    )
    task_ids = [orch.submit(op, inputs) for op, inputs in submit_specs]

    queue = _STAGE_QUEUE[stage]
    started = time.perf_counter()
    procs = [
        multiprocessing.Process(
            target=worker_main,
            args=(str(store_root), str(broker_dir), str(status_dir), [queue]),
        )
        for _ in range(workers)
    ]
    for p in procs:
        p.start()
    for p in procs:
        p.join()
    elapsed = time.perf_counter() - started

    for task_id in task_ids:
        status = orch.status(task_id)
        if status is None or status.state != "succeeded":
            detail = status.error if status else "no status recorded"
            raise RuntimeError(f"bench task failed in stage {stage}: {detail}")
    return elapsed


def bench_scaling(
    corpus: list[bytes],
    worker_counts: list[int],
    work_dir: str | Path,
    train_config: TrainConfig | None = None,
) -> list[BenchRow]:
    """Measure each stage at each worker count; speedup is vs 1 worker."""
    work_dir = Path(work_dir)
    counts = sorted(set(worker_counts) | {1})

    if not corpus:
        return [BenchRow(stage, w, 0.0, 1.0) for stage in STAGES for w in counts]

    store_root = work_dir / "store"
    store = ObjectStore(store_root)
    prep = Orchestrator(store, broker=FileBroker(work_dir / "prep-queues"),
                        statuses=FileStatusStore(work_dir / "prep-statuses"))

    # Prep (untimed): parse everything, train a small model on the first
    # document, and produce labels so assemble tasks are self-contained.
    pdf_keys = [store.put(data, media_type="application/pdf") for data in corpus]
    parse_ids = [prep.submit("parse", {"pdf": k}) for k in pdf_keys]
    prep.run_inline()
    parsed_keys = [prep.status(t).result for t in parse_ids]

    first = deserialize(store.get(parsed_keys[0]))
    config = train_config or TrainConfig(n_trees=20, n_refinement_stages=1)
    manifest = build_training_manifest(
        DEFAULT_LABELS,
        [
            (parsed_keys[0], page.geometry.page_number, ["text"] * len(page.cells))
            for page in first.pages
        ],
        config,
    )
    manifest_key = store.put(manifest)
    train_id = prep.submit("train", {"manifest": manifest_key})
    prep.run_inline()
    model_key = prep.status(train_id).result

    predict_ids = [
        prep.submit("predict", {"parsed": k, "model": model_key}) for k in parsed_keys
    ]
    prep.run_inline()
    label_keys = [prep.status(t).result for t in predict_ids]

    stage_specs: dict[str, list[tuple[str, dict]]] = {
        "parse": [("parse", {"pdf": k}) for k in pdf_keys],
        "ml-apply": [("predict", {"parsed": k, "model": model_key}) for k in parsed_keys],
        "assemble": [
            ("assemble", {"parsed": pk, "labels": lk})
            for pk, lk in zip(parsed_keys, label_keys)
        ],
    }

    rows = []
    for stage in STAGES:
        baseline = None
        for workers in counts:
            seconds = _run_stage(store_root, work_dir, stage, workers, stage_specs[stage])
            if workers == 1:
                baseline = seconds
            rows.append(BenchRow(stage, workers, seconds, baseline / seconds))
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    return "stage,workers,seconds,speedup\n" + "\n".join(r.as_csv() for r in rows) + "\n"
