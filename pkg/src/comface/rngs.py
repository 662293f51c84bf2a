"""Seed-derivation helpers.

All randomness in a run funnels through one root seed. Independent streams
(identity sampling, pair sampling, augmentation, downstream pair plans, ...)
are derived from that seed plus a stable purpose tag, so adding a consumer
never shifts the draws of an existing one.
"""

from __future__ import annotations

import zlib

import numpy as np

_PURPOSE_SPACE = 2**31


def _purpose_code(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8")) % _PURPOSE_SPACE


def seed_for(root_seed: int, purpose: str, *indices: int) -> np.random.SeedSequence:
    """Stable child seed for (root, purpose, indices)."""
    return np.random.SeedSequence([int(root_seed), _purpose_code(purpose), *map(int, indices)])


def rng_for(root_seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Generator seeded by :func:`seed_for`; same arguments, same stream."""
    return np.random.default_rng(seed_for(root_seed, purpose, *indices))
