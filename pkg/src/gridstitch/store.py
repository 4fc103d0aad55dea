"""File-backed pattern persistence with per-id write serialization."""

from __future__ import annotations

import os
import re
import threading

from . import document, templates
from .errors import CorruptDocument, UnknownRef
from .pattern import Pattern

_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class PatternStore:
    """Patterns as canonical JSON files under a root directory.

    Saving and loading round-trip byte-identically; concurrent saves to one
    id are serialized by a per-id lock.
    """

    def __init__(self, root):
        self.root = str(root)
        os.makedirs(self.root, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._counter = 0

    def _path(self, pattern_id: str) -> str:
        if not _ID_RE.match(pattern_id):
            raise UnknownRef(f"invalid pattern id {pattern_id!r}")
        return os.path.join(self.root, f"{pattern_id}.json")

    def lock(self, pattern_id: str) -> threading.Lock:
        with self._locks_guard:
            if pattern_id not in self._locks:
                self._locks[pattern_id] = threading.Lock()
            return self._locks[pattern_id]

    def new_id(self) -> str:
        with self._locks_guard:
            while True:
                self._counter += 1
                pattern_id = f"p{self._counter:04d}"
                if not os.path.exists(self._path(pattern_id)):
                    return pattern_id

    def ids(self) -> list[str]:
        out = []
        for name in sorted(os.listdir(self.root)):
            if name.endswith(".json"):
                out.append(name[: -len(".json")])
        return out

    def exists(self, pattern_id: str) -> bool:
        return os.path.exists(self._path(pattern_id))

    def save(self, pattern_id: str, pattern: Pattern) -> None:
        path = self._path(pattern_id)
        text = document.dumps(pattern)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)

    def load(self, pattern_id: str) -> Pattern:
        path = self._path(pattern_id)
        if not os.path.exists(path):
            raise UnknownRef(f"no pattern {pattern_id!r}")
        return document.load(path)

    def delete(self, pattern_id: str) -> None:
        path = self._path(pattern_id)
        if os.path.exists(path):
            os.remove(path)

    # -- templates (read-only seeds) ---------------------------------------

    def template_names(self) -> list[str]:
        return templates.names()

    def template(self, name: str) -> Pattern:
        return templates.build(name)

    def instantiate_template(self, name: str, phase1_only: bool = False) -> Pattern:
        pattern = templates.build(name)
        if not phase1_only:
            return pattern
        doc = document.to_doc(pattern)
        ops = []
        for op in doc["ops"]:
            if op["op"] == "enter_features":
                break
            ops.append(op)
        doc["ops"] = ops
        try:
            return document.from_doc(doc)
        except CorruptDocument:
            raise
