"""Content-addressed disk cache for expensive decompositions.

Entries are keyed by content hashes (boundary-matrix digests plus an
algorithm version string), stored as gzipped JSON, written atomically, and
guarded by advisory file locks so concurrent processes can share a cache
directory.  A version bump invalidates everything automatically.
"""

from __future__ import annotations

import fcntl
import gzip
import json
import os
from pathlib import Path
from typing import Optional

ALGO_VERSION = "pertop-1"

ENV_VAR = "PERTOP_CACHE_DIR"


class DiskCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json.gz"

    def get(self, key: str) -> Optional[dict]:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            with self._lock(key, shared=True):
                with gzip.open(path, "rt", encoding="utf-8") as fh:
                    payload = json.load(fh)
        except (OSError, ValueError):
            return None
        if payload.get("version") != ALGO_VERSION:
            return None
        return payload

    def put(self, key: str, payload: dict) -> None:
        payload = dict(payload)
        payload["version"] = ALGO_VERSION
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        with self._lock(key, shared=False):
            with gzip.open(tmp, "wt", encoding="utf-8") as fh:
                json.dump(payload, fh, separators=(",", ":"))
            os.replace(tmp, path)

    def _lock(self, key: str, shared: bool):
        return _FileLock(self.root / f"{key}.lock", shared)


class _FileLock:
    def __init__(self, path: Path, shared: bool):
        self.path = path
        self.mode = fcntl.LOCK_SH if shared else fcntl.LOCK_EX
        self.fd = None

    def __enter__(self):
        self.fd = os.open(self.path, os.O_CREAT | os.O_RDWR, 0o644)
        fcntl.flock(self.fd, self.mode)
        return self

    def __exit__(self, *exc):
        fcntl.flock(self.fd, fcntl.LOCK_UN)
        os.close(self.fd)
        return False


def cache_from_env() -> Optional[DiskCache]:
    root = os.environ.get(ENV_VAR)
    return DiskCache(root) if root else None


# -- (de)serialization of cohomology-group build artifacts --------------------

def group_payload(kernel_rows: dict, presentation) -> dict:
    return {
        "kernel_rows": [[lead, sorted(row.items())]
                        for lead, row in sorted(kernel_rows.items())],
        "free_rank": presentation.free_rank,
        "torsion": list(presentation.torsion),
        "ambient": presentation.ambient_rank,
        "coord_rows": [sorted(r.items()) for r in presentation._coord_rows],
        "generators": [sorted(g.items()) for g in presentation._generators],
    }


def group_from_payload(payload: dict):
    from .linalg import AbelianGroupPresentation
    kernel_rows = {int(lead): {int(c): int(v) for c, v in row}
                   for lead, row in payload["kernel_rows"]}
    pres = AbelianGroupPresentation(
        free_rank=int(payload["free_rank"]),
        torsion=[int(t) for t in payload["torsion"]],
        ambient_rank=int(payload["ambient"]),
        coord_rows=[{int(c): int(v) for c, v in row}
                    for row in payload["coord_rows"]],
        generators=[{int(c): int(v) for c, v in row}
                    for row in payload["generators"]])
    return kernel_rows, pres
