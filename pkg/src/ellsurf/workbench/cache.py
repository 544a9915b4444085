"""Persistent cache of per-orbit Frobenius traces.

Layout: ``<cache-dir>/traces.sqlite`` holds one row per orbit representative
(model hash, p, degree, field presentation, representative code) with the
trace as a decimal string and a sha256 checksum over the whole row.  A
``models`` table keeps the spec text of every model seen so that audits can
recompute entries.  A file that fails a checksum is renamed to
``traces.quarantine-<n>.sqlite`` and never read again.
"""

from __future__ import annotations

import hashlib
import random
import sqlite3
import threading
from pathlib import Path


class CacheIntegrityError(RuntimeError):
    pass


def _checksum(key: tuple, value: str) -> str:
    return hashlib.sha256(("|".join(map(str, key)) + "=" + value).encode()).hexdigest()


class TraceCache:
    FILENAME = "traces.sqlite"

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path = self.dir / self.FILENAME
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self._open()

    def _open(self):
        self.db = sqlite3.connect(self.path, check_same_thread=False)
        self.db.execute(
            "CREATE TABLE IF NOT EXISTS traces (model TEXT, p INTEGER, d INTEGER, presentation TEXT, rep INTEGER,"
            " value TEXT, checksum TEXT, PRIMARY KEY (model, p, d, presentation, rep))")
        self.db.execute("CREATE TABLE IF NOT EXISTS models (model TEXT PRIMARY KEY, spec TEXT, p INTEGER)")
        self.db.commit()

    @staticmethod
    def key(model_hash: str, p: int, d: int, presentation: str, rep: int) -> tuple:
        return (model_hash, int(p), int(d), presentation, int(rep))

    def register_model(self, model_hash: str, spec_text: str, p: int):
        with self._lock:
            self.db.execute("INSERT OR REPLACE INTO models VALUES (?, ?, ?)", (model_hash, spec_text, p))
            self.db.commit()

    def get_many(self, keys) -> list:
        out = []
        with self._lock:
            for k in keys:
                row = self.db.execute(
                    "SELECT value, checksum FROM traces WHERE model=? AND p=? AND d=? AND presentation=? AND rep=?",
                    k).fetchone()
                if row is None:
                    out.append(None)
                    continue
                if _checksum(k, row[0]) != row[1]:
                    self._quarantine()
                    raise CacheIntegrityError(f"checksum mismatch for {k}; cache quarantined")
                out.append(int(row[0]))
        hit = sum(1 for v in out if v is not None)
        self.hits += hit
        self.misses += len(out) - hit
        return out

    def put_many(self, items):
        rows = [(*k, str(v), _checksum(k, str(v))) for k, v in items]
        with self._lock:
            self.db.executemany("INSERT OR REPLACE INTO traces VALUES (?, ?, ?, ?, ?, ?, ?)", rows)
            self.db.commit()

    def _quarantine(self):
        self.db.close()
        n = 0
        while (self.dir / f"traces.quarantine-{n}.sqlite").exists():
            n += 1
        self.path.rename(self.dir / f"traces.quarantine-{n}.sqlite")
        self._open()

    # -- maintenance --------------------------------------------------------

    def entries(self):
        return self.db.execute("SELECT model, p, d, presentation, rep, value, checksum FROM traces "
                               "ORDER BY model, p, d, rep").fetchall()

    def stats(self) -> dict:
        n = self.db.execute("SELECT COUNT(*) FROM traces").fetchone()[0]
        per = self.db.execute("SELECT model, p, d, COUNT(*) FROM traces GROUP BY model, p, d "
                              "ORDER BY model, p, d").fetchall()
        total = self.hits + self.misses
        return {
            "entries": n,
            "bytes": self.path.stat().st_size if self.path.exists() else 0,
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": f"{self.hits}/{total}" if total else "0/0",
            "levels": [{"model": m, "p": p, "degree": d, "entries": c} for m, p, d, c in per],
        }

    def clear(self):
        with self._lock:
            self.db.execute("DELETE FROM traces")
            self.db.execute("DELETE FROM models")
            self.db.commit()
        self.hits = self.misses = 0

    def audit(self, recompute, fraction: float = 0.01, seed: int = 0) -> dict:
        """Recompute a random ``fraction`` of entries (at least one) with ``recompute(spec_text, p, d, rep)``.

        Any checksum failure or value mismatch quarantines the cache.
        """
        rows = self.entries()
        if not rows:
            return {"checked": 0, "passed": 0, "failed": []}
        rng = random.Random(seed)
        k = max(1, int(round(len(rows) * fraction)))
        sample = rng.sample(rows, min(k, len(rows)))
        specs = dict(self.db.execute("SELECT model, spec FROM models").fetchall())
        failed = []
        for model, p, d, pres, rep, value, chk in sample:
            key = (model, p, d, pres, rep)
            if _checksum(key, value) != chk:
                failed.append({"key": list(key), "reason": "checksum"})
                continue
            if model not in specs:
                failed.append({"key": list(key), "reason": "unknown model"})
                continue
            fresh = recompute(specs[model], p, d, rep)
            if fresh != int(value):
                failed.append({"key": list(key), "reason": f"cached {value}, recomputed {fresh}"})
        if failed:
            self._quarantine()
        return {"checked": len(sample), "passed": len(sample) - len(failed), "failed": failed}

    def close(self):
        self.db.close()
