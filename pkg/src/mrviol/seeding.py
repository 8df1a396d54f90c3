"""Deterministic derived seeds for parallel sweeps.

Every grid point, repetition and sub-circuit draws from its own generator
derived from (base_seed, *integer keys), so results are independent of
evaluation order and of the number of workers.
"""
from __future__ import annotations

import numpy as np


def child_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))
