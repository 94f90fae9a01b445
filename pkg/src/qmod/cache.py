"""Append-only JSON-lines store for computed orders and reports.

Each line holds one entry; the last entry for a key wins, and entries written
by another toolkit version are ignored.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from filelock import FileLock

from . import __version__

ENV_VAR = "QMOD_CACHE"


@dataclass(frozen=True)
class CacheEntry:
    key: str
    payload: dict
    toolkit_version: str
    timestamp: float

    def to_line(self) -> str:
        return json.dumps({"key": self.key, "payload": self.payload,
                           "toolkit_version": self.toolkit_version,
                           "timestamp": self.timestamp}, sort_keys=True)

    @classmethod
    def from_line(cls, line: str) -> "CacheEntry":
        d = json.loads(line)
        return cls(d["key"], d["payload"], d["toolkit_version"], d["timestamp"])


class Cache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")

    @classmethod
    def from_env(cls, path: Optional[str] = None) -> Optional["Cache"]:
        path = path or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    def _entries(self):
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    yield CacheEntry.from_line(line)
                except (ValueError, KeyError):
                    # a torn final line from an interrupted writer
                    continue

    def get(self, key: str) -> Optional[dict]:
        hit = None
        for e in self._entries():
            if e.key == key:
                hit = e
        if hit is None or hit.toolkit_version != __version__:
            return None
        return hit.payload

    def put(self, key: str, payload: dict) -> None:
        entry = CacheEntry(key, payload, __version__, time.time())
        with self._lock:
            with self.path.open("a") as fh:
                fh.write(entry.to_line() + "\n")
