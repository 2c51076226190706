"""Hierarchical random streams and a replicate map.

Every replicate draws from its own stream, derived from the root seed by
appending the replicate index to the spawn key, so results do not depend
on execution order or on the number of workers.
"""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np



def as_seed_sequence(seed=None) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2**63)))
    return np.random.SeedSequence(seed)


def child(ss: np.random.SeedSequence, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(int(k) for k in keys))


def generator(ss: np.random.SeedSequence, *keys: int) -> np.random.Generator:
    return np.random.default_rng(child(ss, *keys))


def as_generator(rng=None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def describe(ss: np.random.SeedSequence) -> dict:
    return {"entropy": int(ss.entropy), "spawn_key": [int(k) for k in ss.spawn_key]}


def replicate_map(fn: Callable, items: Iterable, n_jobs: int = 1) -> list:
    items = list(items)
    if n_jobs == 1 or len(items) < 2:
        return [fn(i) for i in items]
    from joblib import Parallel, delayed

    return Parallel(n_jobs=n_jobs)(delayed(fn)(i) for i in items)
