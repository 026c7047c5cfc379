"""Seed derivation shared by every sampler.

A replica seed is a pure function of ``(master, experiment, index)``:

    SeedSequence(entropy=master, spawn_key=(crc32(experiment), index)).generate_state(2, uint32)

packed into one unsigned 64-bit word. ``SeedSequence`` does the mixing
(hash-based, avalanche-tested), so nearby masters or indices give unrelated
streams and the result never depends on how replicas are scheduled.
"""
from __future__ import annotations

import zlib

import numpy as np

__all__ = ["derive_seed", "derive_seeds", "philox", "to_seed_int"]

_MASK63 = (1 << 63) - 1


def _name_key(experiment: str) -> int:
    return zlib.crc32(experiment.encode("utf-8"))


def derive_seed(master: int, experiment: str = "", index: int = 0) -> int:
    """Return the 64-bit seed of replica ``index`` of ``experiment``."""
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=(_name_key(experiment), int(index)))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def derive_seeds(master: int, experiment: str, n: int) -> np.ndarray:
    """Vector of ``n`` replica seeds, masked to 63 bits for numba kernels."""
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        out[i] = derive_seed(master, experiment, i) & _MASK63
    return out


def to_seed_int(seed) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    raise TypeError(f"seed must be an integer, got {type(seed).__name__}")


def philox(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator keyed by ``seed`` (and optional sub-stream ids)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
