"""On-disk result cache keyed by a content hash of the case.

Records are JSON files named ``<case id>.json``.  Writes go to a temporary
file in the same directory followed by :func:`os.replace`, so concurrent
writers of one id leave exactly one complete record behind.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "HILBERTFORGE_CACHE"
DEFAULT_DIR = ".hilbertforge-cache"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def case_id(spec: dict, primes, seed: int) -> str:
    """Stable id over the canonical spec and the engine configuration.

    The label and file name are deliberately excluded, so renaming a case
    file keeps its cache entry.
    """
    payload = canonical_json({"spec": spec, "primes": list(primes), "seed": seed})
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


def resolve_dir(flag: str | os.PathLike | None = None) -> Path:
    return Path(flag or os.environ.get(ENV_VAR) or DEFAULT_DIR)


class ResultCache:
    def __init__(self, directory: str | os.PathLike, version: str):
        self.dir = Path(directory)
        self.version = version

    def _path(self, cid: str) -> Path:
        return self.dir / f"{cid}.json"

    def lookup(self, cid: str, primes, seed: int) -> dict | None:
        path = self._path(cid)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        try:
            record = json.loads(raw)
            if not isinstance(record, dict) or record.get("case_id") != cid:
                raise ValueError("record does not belong to this id")
            stamp = (record["tool_version"], record["primes"], record["seed"])
        except (ValueError, KeyError) as exc:
            log.warning("evicting corrupt cache entry %s (%s)", path, exc)
            path.unlink(missing_ok=True)
            return None
        if stamp != (self.version, list(primes), seed):
            return None
        return record

    def store(self, record: dict) -> Path:
        if record.get("tool_version") != self.version:
            raise ValueError(f"record from tool version {record.get('tool_version')!r}, cache is {self.version!r}")
        self.dir.mkdir(parents=True, exist_ok=True)
        target = self._path(record["case_id"])
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(record))
            os.replace(tmp, target)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return target
