"""Content-addressed object store.

Keys are the sha256 of the bytes, so identical content lands on one
object no matter how many producers write it, and retried tasks never
duplicate artifacts. Writes go to a temp file first and are renamed
into place, which keeps concurrent writers safe on POSIX filesystems.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path
from typing import Iterator


class ObjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / key

    @staticmethod
    def key_of(data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()

    def put(self, data: bytes, media_type: str = "application/octet-stream") -> str:
        key = self.key_of(data)
        path = self._path(key)
        if path.exists():
            return key
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        meta = {
            "key": key,
            "media_type": media_type,
            "size": len(data),
            "created": time.time(),
        }
        meta_tmp = path.parent / f".tmp-meta-{key}"
        meta_tmp.write_text(json.dumps(meta, sort_keys=True))
        os.replace(meta_tmp, self._meta_path(key))
        return key

    def _meta_path(self, key: str) -> Path:
        return self._path(key).with_name(f"{key}.meta.json")

    def get(self, key: str) -> bytes:
        path = self._path(key)
        if not path.exists():
            raise KeyError(key)
        return path.read_bytes()

    def exists(self, key: str) -> bool:
        return self._path(key).exists()

    def meta(self, key: str) -> dict:
        path = self._meta_path(key)
        if not path.exists():
            raise KeyError(key)
        return json.loads(path.read_text())

    def keys(self) -> Iterator[str]:
        for shard in sorted(self.root.iterdir()):
            if not shard.is_dir():
                continue
            for path in sorted(shard.iterdir()):
                name = path.name
                if len(name) == 64 and not name.endswith(".meta.json"):
                    yield name
