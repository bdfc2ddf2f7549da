"""Deterministic random streams.

All randomness goes through NumPy's PCG64 bit generator seeded with a
non-negative 64-bit integer. Independent tasks (one realization, one fit
start, ...) get their own stream via :func:`derive_seed`, which hashes the
base seed together with the task index through :class:`numpy.random.SeedSequence`.
"""

from __future__ import annotations

import operator

import numpy as np

_U53 = float(2 ** 53)


def make_rng(seed) -> np.random.Generator:
    """Return a PCG64 generator; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(_check_seed(seed)))


def derive_seed(base: int, *keys: int) -> int:
    """64-bit seed for the task identified by ``keys`` under ``base``."""
    ss = np.random.SeedSequence([_check_seed(base), *(_check_seed(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def open_uniforms(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms strictly inside (0, 1) on a 2**-53 grid offset by half a step."""
    return (rng.integers(0, 2 ** 53, size=n, dtype=np.int64) + 0.5) / _U53


def _check_seed(seed) -> int:
    if isinstance(seed, bool):
        raise TypeError("seed must be an integer, not bool")
    seed = operator.index(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be a non-negative 64-bit integer, got {seed}")
    return seed
