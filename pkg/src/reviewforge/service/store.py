"""File-backed record store with atomic replace semantics.

Every record is one JSON envelope written to a temp file in the same
directory and renamed into place, so a crash at any point leaves either the
old complete record or the new complete record, never a torn one. A content
digest over the payload guards against out-of-band corruption.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from pathlib import Path
from typing import Callable, Optional

from ..errors import ReviewForgeError

logger = logging.getLogger(__name__)

KIND_DIRS = {
    "manuscript": "manuscripts",
    "review": "reviews",
    "job": "jobs",
    "index": "indexes",
}
KINDS = tuple(KIND_DIRS)
SCHEMA_VERSIONS = {"manuscript": 1, "review": 1, "job": 1, "index": 1}

# Checkpoint names passed to the fault hook, in write order.
CHECKPOINTS = ("open", "write", "flush", "fsync", "replace")


class StoreCorruption(ReviewForgeError):
    """A persisted record failed its digest or schema check."""


class UnknownKind(ReviewForgeError):
    pass


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def payload_digest(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload)).hexdigest()


class Store:
    """Single-writer-per-record JSON store under one root directory.

    `fault_hook(checkpoint, detail)` is a test seam: when set, it is invoked
    at each write checkpoint and may raise to simulate a crash mid-write.
    """

    def __init__(self, root: str | Path, fault_hook: Optional[Callable[[str, str], None]] = None):
        self.root = Path(root)
        self.fault_hook = fault_hook
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()
        for directory in KIND_DIRS.values():
            (self.root / directory).mkdir(parents=True, exist_ok=True)

    def _lock_for(self, kind: str, record_id: str) -> threading.Lock:
        key = (kind, record_id)
        with self._locks_guard:
            if key not in self._locks:
                self._locks[key] = threading.Lock()
            return self._locks[key]

    def path_for(self, kind: str, record_id: str) -> Path:
        if kind not in KINDS:
            raise UnknownKind(f"unknown record kind {kind!r}")
        safe = record_id.replace("/", "_")
        return self.root / KIND_DIRS[kind] / f"{safe}.json"

    def _checkpoint(self, name: str, detail: str) -> None:
        if self.fault_hook is not None:
            self.fault_hook(name, detail)

    def write(self, kind: str, record_id: str, payload: dict) -> None:
        if kind not in KINDS:
            raise UnknownKind(f"unknown record kind {kind!r}")
        envelope = {
            "kind": kind,
            "id": record_id,
            "schema_version": SCHEMA_VERSIONS[kind],
            "digest": payload_digest(payload),
            "payload": payload,
        }
        data = json.dumps(envelope, sort_keys=True).encode("utf-8")
        path = self.path_for(kind, record_id)
        tmp = path.with_name(path.name + f".tmp.{os.getpid()}.{threading.get_ident()}")
        # No cleanup on failure: a crash mid-write leaves the temp file behind
        # exactly as a process kill would, and readers never look at it.
        with self._lock_for(kind, record_id):
            self._checkpoint("open", str(tmp))
            with open(tmp, "wb") as fh:
                # Chunked writes so an injected fault can land mid-record.
                for i in range(0, len(data), 4096):
                    self._checkpoint("write", f"{tmp}:{i}")
                    fh.write(data[i : i + 4096])
                self._checkpoint("flush", str(tmp))
                fh.flush()
                self._checkpoint("fsync", str(tmp))
                os.fsync(fh.fileno())
            self._checkpoint("replace", f"{tmp}->{path}")
            os.replace(tmp, path)

    def read(self, kind: str, record_id: str) -> Optional[dict]:
        path = self.path_for(kind, record_id)
        if not path.exists():
            return None
        try:
            envelope = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreCorruption(f"unreadable record {kind}/{record_id}: {exc}") from exc
        payload = envelope.get("payload")
        if not isinstance(payload, dict) or envelope.get("digest") != payload_digest(payload):
            raise StoreCorruption(f"digest mismatch for {kind}/{record_id}")
        return payload

    def exists(self, kind: str, record_id: str) -> bool:
        return self.path_for(kind, record_id).exists()

    def list_ids(self, kind: str) -> list[str]:
        if kind not in KINDS:
            raise UnknownKind(f"unknown record kind {kind!r}")
        directory = self.root / KIND_DIRS[kind]
        return sorted(p.stem for p in directory.glob("*.json"))

    def delete(self, kind: str, record_id: str) -> bool:
        path = self.path_for(kind, record_id)
        if path.exists():
            path.unlink()
            return True
        return False

    def update(self, kind: str, record_id: str, mutate: Callable[[dict], dict]) -> dict:
        """Read-modify-write one record atomically with respect to this store."""
        with self._lock_for(kind, record_id + ".update"):
            payload = self.read(kind, record_id)
            if payload is None:
                raise KeyError(f"{kind}/{record_id} not found")
            updated = mutate(payload)
            self.write(kind, record_id, updated)
            return updated
