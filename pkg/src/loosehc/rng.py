"""Splittable, counter-based random streams.

Every randomized routine takes an explicit seed and derives an independent
Philox stream from (seed, purpose tag, index), so trials can run in any
order or in parallel and still reproduce bit-for-bit.
"""

import hashlib

import numpy as np


def stream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Return the generator for stream (seed, tag, index)."""
    digest = hashlib.sha256(f"{seed}|{tag}|{index}".encode()).digest()
    entropy = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def child_seed(seed: int, tag: str, index: int = 0) -> int:
    """A derived integer seed for passing into seed-taking subsystems."""
    digest = hashlib.sha256(f"{seed}|{tag}|{index}|child".encode()).digest()
    return int.from_bytes(digest[:8], "little")
