"""Deterministic, platform-stable random number streams.

Streams are counter-based (Philox) and derived from a master seed, a
replica id, and a purpose tag by integer-only arithmetic, so replicas can
run in any order on any number of workers without changing results.
Normal variates are produced by inverse-CDF on the uniform stream, which
pins the exact bit pattern across platforms (no ziggurat rejection).
"""

from __future__ import annotations

import hashlib

import numpy as np
from scipy.special import ndtri


def _tag_to_int(tag: str) -> int:
    return int.from_bytes(hashlib.sha256(tag.encode()).digest()[:8], "big")


def derive_stream(master_seed: int, replica_id: int, purpose_tag: str) -> np.random.Generator:
    """Independent Generator for a (seed, replica, purpose) triple."""
    key = np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(int(replica_id), _tag_to_int(purpose_tag)),
    )
    return np.random.Generator(np.random.Philox(key))


def normals(stream: np.random.Generator, size) -> np.ndarray:
    """Standard normals via inverse CDF on uniforms (platform-stable)."""
    u = stream.random(size=size)
    # random() is in [0,1); reflect to (0,1] symmetric usage is unneeded
    # because ndtri(0) would be -inf only at exactly 0, which random()
    # can produce; nudge that lattice point up half an ulp of the stream
    u = np.where(u == 0.0, 2.0**-53, u)
    return ndtri(u)
