"""Asynchronous task orchestration over brokers and the object store."""

from .bench import BenchRow, bench_scaling, read_corpus, rows_to_csv, worker_main
from .broker import (
    FileBroker,
    FileStatusStore,
    InProcessBroker,
    MemoryStatusStore,
    TaskMessage,
    TaskStatus,
)
from .tasks import Operation, OperationContext, Orchestrator, task_id_for

__all__ = [
    "BenchRow",
    "FileBroker",
    "FileStatusStore",
    "InProcessBroker",
    "MemoryStatusStore",
    "Operation",
    "OperationContext",
    "Orchestrator",
    "TaskMessage",
    "TaskStatus",
    "bench_scaling",
    "read_corpus",
    "rows_to_csv",
    "task_id_for",
    "worker_main",
]
