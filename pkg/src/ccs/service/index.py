"""Queryable metadata over stored objects.

A small embedded index: one row per (key, kind) with collection, status
and free-form searchable attributes. Backed by sqlite so queries by
collection, kind and status stay cheap as corpora grow.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass
from pathlib import Path

from .store import ObjectStore


@dataclass(frozen=True)
class MetadataRecord:
    key: str
    collection: str
    kind: str
    status: str
    attrs: dict


class MetadataIndex:
    def __init__(self, path: str | Path = ":memory:"):
        if path != ":memory:":
            Path(path).parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute(
                """CREATE TABLE IF NOT EXISTS records (
                    key TEXT NOT NULL,
                    collection TEXT NOT NULL,
                    kind TEXT NOT NULL,
                    status TEXT NOT NULL,
                    attrs TEXT NOT NULL,
                    PRIMARY KEY (key, collection, kind)
                )"""
            )
            self._conn.execute(
                "CREATE INDEX IF NOT EXISTS by_coll ON records (collection, kind, status)"
            )
            self._conn.commit()

    def put(self, record: MetadataRecord) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO records VALUES (?, ?, ?, ?, ?)",
                (
                    record.key,
                    record.collection,
                    record.kind,
                    record.status,
                    json.dumps(record.attrs, sort_keys=True),
                ),
            )
            self._conn.commit()

    def get(self, key: str, collection: str, kind: str) -> MetadataRecord | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT key, collection, kind, status, attrs FROM records"
                " WHERE key = ? AND collection = ? AND kind = ?",
                (key, collection, kind),
            ).fetchone()
        return self._row_to_record(row) if row else None

    def query(
        self,
        collection: str | None = None,
        kind: str | None = None,
        status: str | None = None,
    ) -> list[MetadataRecord]:
        clauses = []
        args: list[str] = []
        for column, value in (("collection", collection), ("kind", kind), ("status", status)):
            if value is not None:
                clauses.append(f"{column} = ?")
                args.append(value)
        where = f" WHERE {' AND '.join(clauses)}" if clauses else ""
        with self._lock:
            rows = self._conn.execute(
                "SELECT key, collection, kind, status, attrs FROM records"
                + where
                + " ORDER BY collection, kind, key",
                args,
            ).fetchall()
        return [self._row_to_record(r) for r in rows]

    def set_status(self, key: str, collection: str, kind: str, status: str) -> None:
        with self._lock:
            self._conn.execute(
                "UPDATE records SET status = ? WHERE key = ? AND collection = ? AND kind = ?",
                (status, key, collection, kind),
            )
            self._conn.commit()

    def orphans(self, store: ObjectStore) -> list[MetadataRecord]:
        """Records whose key no longer resolves in the object store."""
        return [r for r in self.query() if not store.exists(r.key)]

    @staticmethod
    def _row_to_record(row) -> MetadataRecord:
        return MetadataRecord(
            key=row[0], collection=row[1], kind=row[2], status=row[3], attrs=json.loads(row[4])
        )

    def close(self) -> None:
        with self._lock:
            self._conn.close()
