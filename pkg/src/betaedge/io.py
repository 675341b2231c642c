"""Bit-stable data interchange: CSV particles/trajectories, JSON reports,
JSON-lines event logs, and run manifests with output digests.

Floats are serialized with 17 significant digits so a round trip is the
identity in double precision.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % float(x)


class SerializationError(ValueError):
    pass


def write_particles(path: str, values: np.ndarray):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["index", "value"])
        for i, v in enumerate(np.asarray(values, dtype=float), start=1):
            w.writerow([i, _fmt(v)])


def read_particles(path: str) -> np.ndarray:
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header[:2] != ["index", "value"]:
            raise SerializationError(f"{path}: expected header index,value")
        return np.array([float(row[1]) for row in r])


def write_trajectory(path: str, times, values):
    """values[j, i] = particle i at times[j]; emits rows t,index,value."""
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", "index", "value"])
        for j, t in enumerate(times):
            for i in range(values.shape[1]):
                w.writerow([_fmt(t), i + 1, _fmt(values[j, i])])


def read_trajectory(path: str):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header[:3] != ["t", "index", "value"]:
            raise SerializationError(f"{path}: expected header t,index,value")
        rows = [(float(a), int(b), float(c)) for a, b, c in r]
    times = sorted({t for t, _, _ in rows})
    nidx = max(i for _, i, _ in rows)
    out = np.full((len(times), nidx), np.nan)
    tpos = {t: j for j, t in enumerate(times)}
    for t, i, v in rows:
        out[tpos[t], i - 1] = v
    return np.array(times), out


def _reject_nan(obj, keypath=""):
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        raise SerializationError(
            f"non-finite value at {keypath or '<root>'}; use explicit null")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _reject_nan(v, f"{keypath}.{k}" if keypath else str(k))
    if isinstance(obj, (list, tuple)):
        for j, v in enumerate(obj):
            _reject_nan(v, f"{keypath}[{j}]")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_report(path: str, report: dict):
    doc = _jsonable(report)
    _reject_nan(doc)
    with open(path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True, allow_nan=False)
        f.write("\n")


def read_report(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def append_events(path: str, events: list[dict]):
    with open(path, "a") as f:
        for e in events:
            f.write(json.dumps(_jsonable(e), sort_keys=True) + "\n")


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    tool_version: str
    config_hash: str
    master_seed: int
    stream_ids: list[str] = field(default_factory=list)
    wall_clock_s: float = 0.0
    output_digests: dict[str, str] = field(default_factory=dict)
    created_unix: float = field(default_factory=time.time)

    def add_output(self, path: str):
        self.output_digests[path] = file_digest(path)

    def write(self, path: str):
        write_report(path, asdict(self))


def read_manifest(path: str) -> RunManifest:
    doc = read_report(path)
    return RunManifest(**doc)
