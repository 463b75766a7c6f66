"""Orchestrator: content-hashed task ids, idempotent submit, chains, retries.

Task identity is the hash of what the task would do (operation, input
refs, params, chain template), so resubthe same work returns the
existing status and at-least-once delivery cannot duplicate artifacts:
every store write is content-addressed and every chain follow-up derives
the same task id on redelivery.

Failure policy: pipeline errors (CcsError) describe deterministic facts
about the input, so they fail permanently on the first attempt.
Anything else is treated as transient (worker crash, resource hiccup)
and retried with exponential backoff up to ``max_attempts``.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from ..assemble import assemble
from ..detect import detections_from_bytes, sweep_confidence
from ..errors import CcsError, MissingInputError, NoSuchOperationError, ShapeError
from ..ml.apply import (
    doc_labels_from_bytes,
    doc_labels_to_bytes,
    manifest_from_bytes,
    page_labels_of,
    predict_document,
    train_from_manifest,
)
from ..ml.forest import RandomForestModel
from ..ml.metrics import evaluate
from ..model.serialize import canonical_json_bytes, deserialize, serialize
from ..parser import parse_document
from ..service.index import MetadataIndex, MetadataRecord
from ..service.store import ObjectStore
from .broker import (
    Broker,
    InProcessBroker,
    MemoryStatusStore,
    StatusStore,
    TaskMessage,
    TaskStatus,
)

JSON_MEDIA = "application/json"


@dataclass
class OperationContext:
    store: ObjectStore
    params: dict


@dataclass(frozen=True)
class Operation:
    name: str
    handler: Callable[[OperationContext, dict[str, bytes]], bytes]
    queue: str
    output_kind: str


# ---------------------------------------------------------------- handlers


def _op_parse(ctx: OperationContext, inputs: dict[str, bytes]) -> bytes:
    doc = parse_document(inputs["pdf"])
    return serialize(doc)


def _op_predict(ctx: OperationContext, inputs: dict[str, bytes]) -> bytes:
    doc = deserialize(inputs["parsed"])
    model = RandomForestModel.from_dict(json.loads(inputs["model"]))
    return doc_labels_to_bytes(predict_document(doc, model))


def _op_assemble(ctx: OperationContext, inputs: dict[str, bytes]) -> bytes:
    doc = deserialize(inputs["parsed"])
    page_labels = None
    if "labels" in inputs:
        payload = doc_labels_from_bytes(inputs["labels"])
        if payload["doc_id"] != doc.doc_id:
            raise ShapeError(
                f"labels are for document {payload['doc_id'][:12]}, "
                f"not {doc.doc_id[:12]}"
            )
        page_labels = page_labels_of(payload)
    return serialize(assemble(doc, page_labels))


def _op_train(ctx: OperationContext, inputs: dict[str, bytes]) -> bytes:
    manifest = manifest_from_bytes(inputs["manifest"])

    def fetch(key: str) -> bytes:
        try:
            return ctx.store.get(key)
        except KeyError:
            raise MissingInputError(f"manifest references missing object {key[:12]}") from None

    model = train_from_manifest(manifest, fetch, deserialize)
    # In-sample metrics ride along in the model metadata so the service
    # can report them without a second pass over the corpus.
    docs = {}
    truth: list[str] = []
    predicted: list[str] = []
    for entry in manifest["pages"]:
        key = entry["parsed_key"]
        if key not in docs:
            docs[key] = deserialize(fetch(key))
        page = next(
            p for p in docs[key].pages if p.geometry.page_number == entry["page_number"]
        )
        truth.extend(entry["labels"])
        predicted.extend(model.predict(page).labels)
    model.metadata["metrics"] = evaluate(truth, predicted, manifest["label_set"])
    model.metadata["trained_pages"] = len(manifest["pages"])
    model.metadata["trained_cells"] = len(truth)
    return model.to_bytes()


def _op_detect_eval(ctx: OperationContext, inputs: dict[str, bytes]) -> bytes:
    doc = deserialize(inputs["parsed"])
    detections = detections_from_bytes(inputs["detections"])
    labels = doc_labels_from_bytes(inputs["labels"])
    target = ctx.params.get("target_label", "table")
    truth_by_page = {
        page["page_number"]: [lbl == target for lbl in page["labels"]]
        for page in labels["pages"]
    }
    rows = []
    for page in doc.pages:
        n = page.geometry.page_number
        if not page.cells or n not in truth_by_page:
            continue
        result = sweep_confidence(detections.get(n, []), truth_by_page[n], list(page.cells))
        rows.append(
            {
                "page_number": n,
                "best_threshold": result.best_threshold,
                "best_f1": result.best_f1,
                "points": [
                    {
                        "threshold": p.threshold,
                        "precision": p.precision,
                        "recall": p.recall,
                        "f1": p.f1,
                    }
                    for p in result.points
                ],
            }
        )
    return canonical_json_bytes(
        {
            "format": "detect-eval.v1",
            "schema_version": 1,
            "doc_id": doc.doc_id,
            "target_label": target,
            "pages": rows,
        }
    )


DEFAULT_OPERATIONS: tuple[Operation, ...] = (
    Operation("parse", _op_parse, queue="parse", output_kind="parsed"),
    Operation("predict", _op_predict, queue="ml", output_kind="labels"),
    Operation("assemble", _op_assemble, queue="assemble", output_kind="structured"),
    Operation("train", _op_train, queue="train", output_kind="model"),
    Operation("detect-eval", _op_detect_eval, queue="detect", output_kind="detections"),
)


# ------------------------------------------------------------ orchestrator


def task_id_for(
    operation: str,
    inputs: Mapping[str, str],
    params: Mapping | None = None,
    chain: Mapping | None = None,
) -> str:
    payload = json.dumps(
        {
            "operation": operation,
            "inputs": dict(inputs),
            "params": dict(params or {}),
            "chain": chain,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Orchestrator:
    """Submits, executes, and chains tasks over a broker and object store.

    ``fault_injector`` is a test hook called with the message before the
    handler runs; exceptions it raises look like worker crashes.
    """

    def __init__(
        self,
        store: ObjectStore,
        broker: Broker | None = None,
        statuses: StatusStore | None = None,
        index: MetadataIndex | None = None,
        *,
        max_attempts: int = 3,
        retry_backoff: float = 1.0,
        fault_injector: Callable[[TaskMessage], None] | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.store = store
        self.broker = broker if broker is not None else InProcessBroker()
        self.statuses = statuses if statuses is not None else MemoryStatusStore()
        self.index = index
        self.max_attempts = max_attempts
        self.retry_backoff = retry_backoff
        self.fault_injector = fault_injector
        self.sleep = sleep
        self.operations: dict[str, Operation] = {op.name: op for op in DEFAULT_OPERATIONS}
        self._submit_lock = threading.Lock()

    def register(self, op: Operation) -> None:
        self.operations[op.name] = op

    def queue_names(self) -> list[str]:
        seen = []
        for op in self.operations.values():
            if op.queue not in seen:
                seen.append(op.queue)
        return seen

    # ------------------------------------------------------------ submit

    def _check_registered(self, operation: str, chain: Mapping | None) -> None:
        if operation not in self.operations:
            raise NoSuchOperationError(f"unknown operation {operation!r}")
        while chain is not None:
            name = chain.get("operation")
            if name not in self.operations:
                raise NoSuchOperationError(f"unknown operation {name!r} in chain")
            chain = chain.get("chain")

    def submit(
        self,
        operation: str,
        inputs: Mapping[str, str] | None = None,
        params: Mapping | None = None,
        chain: Mapping | None = None,
    ) -> str:
        """Enqueue a task; resubmission of identical work is a no-op."""
        self._check_registered(operation, chain)
        inputs = dict(inputs or {})
        params = dict(params or {})
        task_id = task_id_for(operation, inputs, params, chain)
        with self._submit_lock:
            if self.statuses.get(task_id) is not None:
                return task_id
            self.statuses.set(
                TaskStatus(
                    task_id=task_id,
                    state="queued",
                    operation=operation,
                    created=time.time(),
                )
            )
        self.broker.publish(
            TaskMessage(
                task_id=task_id,
                queue=self.operations[operation].queue,
                operation=operation,
                inputs=inputs,
                params=params,
                chain=dict(chain) if chain else None,
            )
        )
        return task_id

    def chain(
        self,
        operation: str,
        inputs: Mapping[str, str],
        then: Mapping,
        params: Mapping | None = None,
    ) -> str:
        """Submit ``operation`` with a follow-up template.

        The template holds the follow-up's operation, the input name its
        predecessor's result is bound to, optional static inputs/params,
        and optionally another nested template under "chain".
        """
        return self.submit(operation, inputs, params, chain=then)

    def status(self, task_id: str) -> TaskStatus | None:
        return self.statuses.get(task_id)

    def chain_status(self, task_id: str) -> TaskStatus | None:
        """Follow next_task_id links to the most downstream status."""
        status = self.statuses.get(task_id)
        while status is not None and status.next_task_id:
            nxt = self.statuses.get(status.next_task_id)
            if nxt is None:
                break
            status = nxt
        return status

    # ----------------------------------------------------------- execute

    def _resolve_inputs(self, inputs: Mapping[str, str]) -> dict[str, bytes]:
        resolved = {}
        for name, key in inputs.items():
            try:
                resolved[name] = self.store.get(key)
            except KeyError:
                raise MissingInputError(
                    f"input {name!r} references missing object {key[:12]}"
                ) from None
        return resolved

    def _finish(self, status: TaskStatus, state: str, **fields) -> TaskStatus:
        status.state = state
        status.finished = time.time()
        for name, value in fields.items():
            setattr(status, name, value)
        self.statuses.set(status)
        return status

    def process(self, msg: TaskMessage) -> TaskStatus:
        """Execute one delivery of a task and return its status.

        Safe under redelivery: a finished task is never re-run.
        """
        status = self.statuses.get(msg.task_id) or TaskStatus(
            task_id=msg.task_id, operation=msg.operation, created=time.time()
        )
        if status.state in ("succeeded", "failed"):
            return status
        status.state = "running"
        status.attempt = msg.attempt
        if not status.started:
            status.started = time.time()
        self.statuses.set(status)

        try:
            if self.fault_injector is not None:
                self.fault_injector(msg)
            op = self.operations.get(msg.operation)
            if op is None:
                raise NoSuchOperationError(f"unknown operation {msg.operation!r}")
            payload = op.handler(
                OperationContext(self.store, dict(msg.params)), self._resolve_inputs(msg.inputs)
            )
        except CcsError as exc:
            return self._finish(status, "failed", error=str(exc), error_code=exc.code)
        except Exception as exc:
            if msg.attempt >= self.max_attempts:
                return self._finish(
                    status, "failed", error=f"{type(exc).__name__}: {exc}", error_code="crash"
                )
            self.sleep(self.retry_backoff * (2 ** (msg.attempt - 1)))
            retry = msg.retry()
            status.attempt = retry.attempt
            self.statuses.set(status)
            self.broker.publish(retry)
            return status

        key = self.store.put(payload, media_type=JSON_MEDIA)
        if self.index is not None:
            # Scalar params ride along so callers can find outputs again
            # (e.g. the parsed artifact for a given doc_id).
            attrs = {k: v for k, v in msg.params.items() if isinstance(v, (str, int, float, bool))}
            attrs.update(task_id=msg.task_id, operation=msg.operation)
            self.index.put(
                MetadataRecord(
                    key=key,
                    collection=str(msg.params.get("collection", "")),
                    kind=op.output_kind,
                    status="succeeded",
                    attrs=attrs,
                )
            )
        next_task_id = None
        if msg.chain:
            next_task_id = self._submit_follow_up(msg.chain, key)
        return self._finish(status, "succeeded", result=key, next_task_id=next_task_id)

    def _submit_follow_up(self, template: Mapping, result_key: str) -> str:
        inputs = dict(template.get("inputs") or {})
        inputs[template.get("input_key", "input")] = result_key
        return self.submit(
            template["operation"],
            inputs,
            template.get("params"),
            chain=template.get("chain"),
        )

    # ----------------------------------------------------------- workers

    def _drain_loop(
        self,
        queues: Iterable[str],
        counters: dict,
        counters_lock: threading.Lock,
        activity: dict,
        stall_timeout: float,
    ) -> None:
        queues = list(queues)
        while True:
            msg = self.broker.claim(queues)
            if msg is None:
                if self.broker.queue_depth() == 0:
                    return
                if time.time() - activity["last"] > stall_timeout:
                    return  # tasks stranded on unserved queues
                self.sleep(0.002)
                continue
            status = self.process(msg)
            self.broker.ack(msg)
            with counters_lock:
                activity["last"] = time.time()
                counters["processed"] += 1
                if status.state == "succeeded":
                    counters["succeeded"] += 1
                elif status.state == "failed":
                    counters["failed"] += 1
                else:
                    counters["retried"] += 1

    def run_workers(
        self, worker_config: Mapping[str, int] | None = None, stall_timeout: float = 60.0
    ) -> dict:
        """Drain the broker with one thread per configured worker.

        ``worker_config`` maps queue name to worker count, e.g.
        {"parse": 4, "ml": 2, "assemble": 1}; by default every known
        queue gets one worker. Returns an execution report.
        """
        if worker_config is None:
            worker_config = {q: 1 for q in self.queue_names()}
        counters = {"processed": 0, "succeeded": 0, "failed": 0, "retried": 0}
        lock = threading.Lock()
        activity = {"last": time.time()}
        threads = []
        for queue, count in worker_config.items():
            for _ in range(count):
                t = threading.Thread(
                    target=self._drain_loop,
                    args=([queue], counters, lock, activity, stall_timeout),
                    daemon=True,
                )
                threads.append(t)
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        counters["stranded"] = self.broker.queue_depth()
        counters["workers"] = dict(worker_config)
        return counters

    def run_inline(self, stall_timeout: float = 60.0) -> dict:
        """Single-threaded drain across all queues (CLI and tests)."""
        counters = {"processed": 0, "succeeded": 0, "failed": 0, "retried": 0}
        self._drain_loop(
            self.queue_names(), counters, threading.Lock(), {"last": time.time()}, stall_timeout
        )
        counters["stranded"] = self.broker.queue_depth()
        return counters
