"""Seed splitting.

Every random draw derives from one integer seed. Streams are keyed by a
purpose label and optional indices, so the stream for agent 7 does not
depend on how many agents were drawn before it.
"""

from __future__ import annotations

import zlib

import numpy as np


def _label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def stream(seed: int, label: str, *index: int) -> np.random.Generator:
    """Independent Philox generator for ``(seed, label, *index)``."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(_label_key(label), *map(int, index)))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, label: str, *index: int) -> int:
    """A 63-bit integer seed for ``(seed, label, *index)``, for APIs that take
    an integer rather than a generator."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(_label_key(label), *map(int, index)))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
