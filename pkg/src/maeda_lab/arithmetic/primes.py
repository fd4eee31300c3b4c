"""Segmented prime sieve (NumPy vectorized) and the segment plan used by scans."""

from __future__ import annotations

import math

import numpy as np

from ..config import settings
from ..errors import PreconditionError


def simple_sieve(limit: int) -> np.ndarray:
    """Classic sieve up to ``limit`` (inclusive), returns primes as int64 numpy array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p : limit + 1 : p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def segment_plan(limit: int, segment_size: int | None = None) -> list[tuple[int, int, int]]:
    """(idx, low, high_exclusive) segments covering [2, limit] in ascending order."""
    check_prime_limit(limit)
    span = segment_size or settings.segment_size
    plan = []
    low = 2
    while low <= limit:
        high = min(low + span, limit + 1)
        plan.append((len(plan), low, high))
        low = high
    return plan


def primes_in_segment(low: int, high_exclusive: int, base_primes: np.ndarray) -> np.ndarray:
    """All primes in [low, high_exclusive), given the primes up to sqrt(high)."""
    size = high_exclusive - low
    if size <= 0:
        return np.array([], dtype=np.int64)
    mask = np.ones(size, dtype=bool)
    if low < 2:
        mask[: 2 - low] = False
    for p in base_primes.tolist():
        p2 = p * p
        if p2 >= high_exclusive:
            break
        # first multiple of p in [low, high) that is not p itself
        start = max(p2, ((low + p - 1) // p) * p)
        if start < high_exclusive:
            mask[start - low :: p] = False
    return low + np.flatnonzero(mask).astype(np.int64)


def base_primes_for(limit: int) -> np.ndarray:
    return simple_sieve(math.isqrt(limit) + 1)


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit as Python ints."""
    if limit < 2:
        return []
    base = base_primes_for(limit)
    return [p for _, low, high in segment_plan(limit) for p in primes_in_segment(low, high, base).tolist()]


def check_prime_limit(limit: int) -> None:
    if limit > settings.prime_cap:
        raise PreconditionError(f"prime limit {limit} exceeds the cap {settings.prime_cap}")
