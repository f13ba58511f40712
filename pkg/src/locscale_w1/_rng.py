"""Reproducible uniform streams.

Every stream is numpy's Philox-4x64-10 counter-based generator keyed by a
64-bit integer. Raw 64-bit outputs are mapped to doubles strictly inside
(0, 1) by ``((raw >> 11) + 0.5) * 2**-53``, so inverse-transform sampling
never sees 0 or 1. Sub-stream keys come from a splitmix64 finalizer over
(master seed, replication, side), so replications can run in any order.
"""

import numpy as np

ALGORITHM = "philox4x64-10/splitmix64"

_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master: int, rep: int, side: int) -> int:
    """Key for replication ``rep`` and sample ``side`` under ``master``."""
    return mix64(mix64(mix64(int(master) & _MASK) ^ (int(rep) & _MASK)) ^ (int(side) & _MASK))


def uniforms(seed: int, n: int) -> np.ndarray:
    """``n`` doubles in (0, 1) from the stream keyed by ``seed``."""
    bitgen = np.random.Philox(key=int(seed) & _MASK)
    raw = bitgen.random_raw(int(n))
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)
