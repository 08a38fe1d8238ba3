"""File-backed assessment store: one JSON document per file, atomic writes.

Documents are written to a temp area and committed with an atomic rename,
so a crash mid-write leaves either the old or the new version on disk,
never a truncated file. Writes take an optional expected revision for
optimistic concurrency; per-id serialization guarantees exactly one winner
per revision.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .assessment import (
    AssessmentDocument,
    DocumentError,
    Status,
    document_from_payload,
    document_to_payload,
)

_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class StoreError(Exception):
    """I/O failure while reading or writing the store."""


class NotFoundError(KeyError):
    def __init__(self, doc_id: str):
        super().__init__(doc_id)
        self.doc_id = doc_id

    def __str__(self) -> str:
        return f"no document with id {self.doc_id!r}"


class VersionConflictError(Exception):
    def __init__(self, doc_id: str, expected: int, actual: int):
        super().__init__(
            f"document {self.fmt(doc_id)}: expected revision {expected}, found {actual}"
        )
        self.doc_id = doc_id
        self.expected = expected
        self.actual = actual

    @staticmethod
    def fmt(doc_id: str) -> str:
        return repr(doc_id)


@dataclass(frozen=True)
class DocumentSummary:
    id: str
    threat: str
    status: Status
    revision: int


class DocumentStore:
    """Directory of assessment documents with optimistic versioning."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.tmp = self.root / ".tmp"
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            self.tmp.mkdir(exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create store at {self.root}: {exc}") from exc
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}

    def _lock_for(self, doc_id: str) -> threading.Lock:
        with self._guard:
            lock = self._locks.get(doc_id)
            if lock is None:
                lock = threading.Lock()
                self._locks[doc_id] = lock
            return lock

    def _path(self, doc_id: str) -> Path:
        if not _ID_PATTERN.match(doc_id):
            raise DocumentError(f"document id {doc_id!r} is not filesystem-safe")
        return self.root / f"{doc_id}.json"

    def _current_revision(self, doc_id: str) -> int:
        path = self._path(doc_id)
        if not path.exists():
            return 0
        return self._read(doc_id).revision

    def _read(self, doc_id: str) -> AssessmentDocument:
        path = self._path(doc_id)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
        except FileNotFoundError:
            raise NotFoundError(doc_id) from None
        except OSError as exc:
            raise StoreError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StoreError(f"corrupt document file {path}: {exc}") from exc
        return document_from_payload(payload)

    def put(
        self, doc: AssessmentDocument, expected_revision: int | None = None
    ) -> int:
        """Write the document atomically and return its stored revision.

        ``expected_revision`` enables optimistic concurrency: pass the
        revision last seen (0 for create-only). A mismatch raises
        :class:`VersionConflictError` and writes nothing.
        """
        path = self._path(doc.id)
        with self._lock_for(doc.id):
            current = self._current_revision(doc.id)
            if expected_revision is not None and expected_revision != current:
                raise VersionConflictError(doc.id, expected_revision, current)
            new_revision = current + 1
            stored = replace(doc, revision=new_revision)
            data = json.dumps(
                document_to_payload(stored), indent=2, ensure_ascii=False
            ) + "\n"
            try:
                fd, tmp_name = tempfile.mkstemp(
                    dir=self.tmp, prefix=f"{doc.id}.", suffix=".part"
                )
                try:
                    with os.fdopen(fd, "w", encoding="utf-8") as fh:
                        fh.write(data)
                        fh.flush()
                        os.fsync(fh.fileno())
                    os.replace(tmp_name, path)
                finally:
                    if os.path.exists(tmp_name):
                        os.unlink(tmp_name)
            except OSError as exc:
                raise StoreError(f"cannot write {path}: {exc}") from exc
            return new_revision

    def get(self, doc_id: str) -> AssessmentDocument:
        return self._read(doc_id)

    def exists(self, doc_id: str) -> bool:
        return self._path(doc_id).exists()

    def list(self) -> list[DocumentSummary]:
        """Summaries of every committed document, sorted by id."""
        summaries = []
        for path in sorted(self.root.glob("*.json")):
            doc = self._read(path.stem)
            summaries.append(
                DocumentSummary(
                    id=doc.id, threat=doc.threat, status=doc.status, revision=doc.revision
                )
            )
        return summaries

    def load_all(self) -> list[AssessmentDocument]:
        return [self._read(path.stem) for path in sorted(self.root.glob("*.json"))]

    def delete(self, doc_id: str) -> None:
        path = self._path(doc_id)
        with self._lock_for(doc_id):
            try:
                os.unlink(path)
            except FileNotFoundError:
                raise NotFoundError(doc_id) from None
            except OSError as exc:
                raise StoreError(f"cannot delete {path}: {exc}") from exc
