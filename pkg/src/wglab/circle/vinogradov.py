"""Vinogradov mean value counts J_t^(k)(H)."""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import DomainError, ScaleError

HASH_LIMIT = 4_000_000
NESTED_LIMIT = 20_000_000


def _moment_vectors(k: int, t: int, H: int) -> np.ndarray:
    grid = np.stack(np.meshgrid(*[np.arange(1, H + 1, dtype=np.int64)] * t, indexing="ij"), -1).reshape(-1, t)
    return np.stack([np.sum(grid ** j, axis=1) for j in range(1, k + 1)], axis=1)


def vinogradov_count(k: int, t: int, H: int) -> int:
    """#{x in [1,H]^(2t) : sum_{i<=t} x_i^j = sum_{i>t} x_i^j, j = 1..k}, by hashing t-fold moment vectors."""
    if k < 1 or t < 1 or H < 1:
        raise DomainError("k, t, H must be positive")
    if H ** t > HASH_LIMIT:
        raise ScaleError(f"H^t = {H ** t} exceeds {HASH_LIMIT}")
    vecs = _moment_vectors(k, t, H)
    _, counts = np.unique(vecs, axis=0, return_counts=True)
    return int(np.sum(counts.astype(object) ** 2))


def vinogradov_count_nested(k: int, t: int, H: int) -> int:
    """Oracle: loop over all 2t-tuples and test the k equations."""
    if H ** (2 * t) > NESTED_LIMIT:
        raise ScaleError(f"H^(2t) = {H ** (2 * t)} exceeds {NESTED_LIMIT}")
    count = 0
    rng = range(1, H + 1)
    for xs in itertools.product(rng, repeat=2 * t):
        left, right = xs[:t], xs[t:]
        if all(sum(x ** j for x in left) == sum(x ** j for x in right) for j in range(1, k + 1)):
            count += 1
    return count
