"""Task messages, statuses, and broker implementations.

Two brokers share one claim/ack contract: an in-process queue for tests
and single-process CLI runs, and a directory-backed queue whose claim
operation is an atomic rename, for multi-process workers. An external
broker product can be slotted in by implementing the same three calls.
"""

from __future__ import annotations

import json
import os
import threading
import time
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Protocol

STATES = ("queued", "running", "succeeded", "failed")
_STATE_RANK = {s: i for i, s in enumerate(STATES)}


@dataclass(frozen=True)
class TaskMessage:
    task_id: str
    queue: str
    operation: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    chain: dict | None = None  # template for the follow-up task
    attempt: int = 1

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "queue": self.queue,
            "operation": self.operation,
            "inputs": dict(self.inputs),
            "params": dict(self.params),
            "chain": self.chain,
            "attempt": self.attempt,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TaskMessage":
        return cls(
            task_id=raw["task_id"],
            queue=raw["queue"],
            operation=raw["operation"],
            inputs=dict(raw.get("inputs") or {}),
            params=dict(raw.get("params") or {}),
            chain=raw.get("chain"),
            attempt=int(raw.get("attempt", 1)),
        )

    def retry(self) -> "TaskMessage":
        return replace(self, attempt=self.attempt + 1)


@dataclass
class TaskStatus:
    task_id: str
    state: str = "queued"
    operation: str = ""
    attempt: int = 1
    result: str | None = None
    next_task_id: str | None = None  # set when this task enqueued a chained follow-up
    error: str | None = None
    error_code: str | None = None
    created: float = 0.0
    started: float = 0.0
    finished: float = 0.0

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, raw: dict) -> "TaskStatus":
        return cls(**raw)


class Broker(Protocol):
    def publish(self, msg: TaskMessage) -> None: ...

    def claim(self, queues: Iterable[str]) -> TaskMessage | None: ...

    def ack(self, msg: TaskMessage) -> None: ...

    def queue_depth(self) -> int: ...


class InProcessBroker:
    """Thread-safe queues plus an in-flight set; claim pops FIFO."""

    def __init__(self):
        self._lock = threading.Lock()
        self._queues: dict[str, deque[TaskMessage]] = {}
        self._in_flight: dict[str, TaskMessage] = {}

    def publish(self, msg: TaskMessage) -> None:
        with self._lock:
            self._queues.setdefault(msg.queue, deque()).append(msg)

    def claim(self, queues: Iterable[str]) -> TaskMessage | None:
        with self._lock:
            for name in queues:
                q = self._queues.get(name)
                if q:
                    msg = q.popleft()
                    self._in_flight[msg.task_id] = msg
                    return msg
        return None

    def ack(self, msg: TaskMessage) -> None:
        with self._lock:
            self._in_flight.pop(msg.task_id, None)

    def queue_depth(self) -> int:
        with self._lock:
            return sum(len(q) for q in self._queues.values()) + len(self._in_flight)


class FileBroker:
    """Queue directories of JSON messages; rename-to-claim, unlink-to-ack.

    os.rename is atomic within a filesystem, so exactly one process wins
    each claim; losers just move to the next message.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _qdir(self, queue: str) -> Path:
        return self.root / queue

    def publish(self, msg: TaskMessage) -> None:
        pending = self._qdir(msg.queue) / "pending"
        pending.mkdir(parents=True, exist_ok=True)
        name = f"{time.time():.6f}-{msg.task_id}-{msg.attempt}.json"
        tmp = pending / f".tmp-{name}"
        tmp.write_text(json.dumps(msg.to_dict()))
        os.replace(tmp, pending / name)

    def claim(self, queues: Iterable[str]) -> TaskMessage | None:
        for queue in queues:
            pending = self._qdir(queue) / "pending"
            claimed = self._qdir(queue) / "claimed"
            if not pending.is_dir():
                continue
            claimed.mkdir(parents=True, exist_ok=True)
            for path in sorted(pending.iterdir()):
                if path.name.startswith("."):
                    continue
                target = claimed / f"{path.name}.{os.getpid()}"
                try:
                    os.rename(path, target)
                except OSError:
                    continue  # another worker won this one
                return TaskMessage.from_dict(json.loads(target.read_text()))
        return None

    def ack(self, msg: TaskMessage) -> None:
        for queue_dir in self.root.iterdir():
            claimed = queue_dir / "claimed"
            if not claimed.is_dir():
                continue
            for path in claimed.iterdir():
                if f"-{msg.task_id}-{msg.attempt}.json" in path.name:
                    path.unlink(missing_ok=True)
                    return

    def queue_depth(self) -> int:
        n = 0
        for queue_dir in self.root.iterdir():
            for sub in ("pending", "claimed"):
                d = queue_dir / sub
                if d.is_dir():
                    n += sum(1 for p in d.iterdir() if not p.name.startswith("."))
        return n


class StatusStore(Protocol):
    def get(self, task_id: str) -> TaskStatus | None: ...

    def set(self, status: TaskStatus) -> None: ...


class MemoryStatusStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._statuses: dict[str, TaskStatus] = {}

    def get(self, task_id: str) -> TaskStatus | None:
        with self._lock:
            s = self._statuses.get(task_id)
            return TaskStatus.from_dict(s.to_dict()) if s else None

    def set(self, status: TaskStatus) -> None:
        with self._lock:
            old = self._statuses.get(status.task_id)
            if old and _STATE_RANK[status.state] < _STATE_RANK[old.state]:
                return  # transitions only move forward
            self._statuses[status.task_id] = TaskStatus.from_dict(status.to_dict())


class FileStatusStore:
    """One JSON file per task; atomic replace keeps readers consistent."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, task_id: str) -> Path:
        return self.root / f"{task_id}.json"

    def get(self, task_id: str) -> TaskStatus | None:
        path = self._path(task_id)
        try:
            return TaskStatus.from_dict(json.loads(path.read_text()))
        except FileNotFoundError:
            return None

    def set(self, status: TaskStatus) -> None:
        old = self.get(status.task_id)
        if old and _STATE_RANK[status.state] < _STATE_RANK[old.state]:
            return
        tmp = self.root / f".tmp-{status.task_id}-{os.getpid()}"
        tmp.write_text(json.dumps(status.to_dict()))
        os.replace(tmp, self._path(status.task_id))
