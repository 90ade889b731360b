"""Seeded random streams.

All stochastic code draws from numpy's Philox4x64 counter-based generator.
Independent work items (replicates, ABC chunks) get their own stream keyed by
``(seed, *keys)`` through ``SeedSequence`` spawn keys, so results do not
depend on the order in which the items are evaluated.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "Philox4x64-10 (numpy.random.Philox) keyed by SeedSequence(seed, spawn_key)"


def _seq(seed: int, keys) -> np.random.SeedSequence:
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(_seq(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """A 63-bit integer seed for work item ``keys`` under ``seed``."""
    hi, lo = _seq(seed, keys).generate_state(2, np.uint32)
    return ((int(hi) << 32) | int(lo)) >> 1
