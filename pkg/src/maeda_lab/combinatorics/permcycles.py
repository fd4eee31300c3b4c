"""Exact combinatorics of d-cycles in symmetric groups.

Closed formulas count the permutations of S_n containing at least one
d-cycle, exactly j of them, and the two special subsets through the points
1 and 2 that bound the sign discrepancy. An exhaustive enumeration of S_n
(n <= 10) serves as the oracle and a vectorized Monte Carlo sampler covers
large n.

Points are 1-based in the public types and 0-based internally.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction

import numpy as np
from pydantic import Field, model_validator

from ..config import settings
from ..errors import (
    DegreeOutOfRangeError,
    ExactnessError,
    InvalidCycleLengthError,
    PreconditionError,
)
from ..schemas import BigInt, LabModel
from .sequences import a_value, b_value, signed_ratio_bound

logger = logging.getLogger(__name__)

# (cycle lengths non-increasing, length through point 1, length through point 2, same cycle)
CycleKey = tuple[tuple[int, ...], int, int, bool]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class Permutation(LabModel):
    """A permutation of {1..n} in one-line notation."""

    images: tuple[int, ...]

    @model_validator(mode="after")
    def _bijective(self) -> "Permutation":
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{len(self.images)}")
        return self

    @property
    def n(self) -> int:
        return len(self.images)


class CycleType(LabModel):
    lengths: tuple[int, ...]
    n: int
    sign: int

    @model_validator(mode="after")
    def _consistent(self) -> "CycleType":
        if any(x < 1 for x in self.lengths) or list(self.lengths) != sorted(self.lengths, reverse=True):
            raise ValueError("lengths must be positive and non-increasing")
        if sum(self.lengths) != self.n:
            raise ValueError("lengths must sum to n")
        if self.sign != (-1) ** (self.n - len(self.lengths)):
            raise ValueError("sign must be (-1)^(n - number of cycles)")
        return self


class DCycleCensus(LabModel):
    """Counts of permutations in S_n by d-cycle content and sign."""

    n: int = Field(ge=1)
    d: int = Field(ge=1)
    total: BigInt
    at_least_one: BigInt
    # exactly_j[j - 1] counts permutations with exactly j d-cycles, j = 1..n // d
    exactly_j: tuple[BigInt, ...]
    plus: BigInt
    minus: BigInt
    special_b1: BigInt
    special_b2: BigInt

    @model_validator(mode="after")
    def _invariants(self) -> "DCycleCensus":
        counts = (self.at_least_one, self.plus, self.minus, self.special_b1, self.special_b2, *self.exactly_j)
        if any(c < 0 or c > self.total for c in counts):
            raise ValueError("every count must lie in [0, n!]")
        if len(self.exactly_j) != self.n // self.d:
            raise ValueError("exactly_j must have n // d entries")
        if sum(self.exactly_j) != self.at_least_one:
            raise ValueError("exactly_j must sum to at_least_one")
        if self.plus + self.minus != self.at_least_one:
            raise ValueError("plus + minus must equal at_least_one")
        return self


class ProportionEstimate(LabModel):
    count: int
    proportion: float
    stderr: float


class MonteCarloCensus(LabModel):
    """Sampled proportions of A_n(d) and B_n(d, j); floats, not guaranteed."""

    n: int
    d: int
    samples: int
    seed: int
    at_least_one: ProportionEstimate
    exactly_j: tuple[ProportionEstimate, ...]
    guaranteed: bool = False


# ---------------------------------------------------------------------------
# Cycle decomposition
# ---------------------------------------------------------------------------

def _cycle_key(perm: tuple[int, ...]) -> CycleKey:
    n = len(perm)
    seen = [False] * n
    lengths = []
    through_first = through_second = 0
    same = False
    for start in range(n):
        if seen[start]:
            continue
        length, x, has_second = 0, start, False
        while not seen[x]:
            seen[x] = True
            if x == 1:
                has_second = True
            x = perm[x]
            length += 1
        if start == 0:
            through_first, same = length, has_second
        if has_second:
            through_second = length
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths), through_first, through_second, same


def cycle_type(p: Permutation) -> CycleType:
    """Orbit sizes of p on {1..n}, non-increasing, with the sign."""
    lengths = _cycle_key(tuple(x - 1 for x in p.images))[0]
    return CycleType(lengths=lengths, n=p.n, sign=(-1) ** (p.n - len(lengths)))


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------

def _tally_partition(n: int, first_image: int) -> Counter:
    """Cycle keys of every permutation sending point 1 to ``first_image``."""
    rest = [x for x in range(n) if x != first_image]
    tally: Counter = Counter()
    for tail in itertools.permutations(rest):
        tally[_cycle_key((first_image, *tail))] += 1
    return tally


_tallies: dict[int, Counter] = {}


def census_tally(n: int, workers: int | None = None) -> Counter:
    """Counter of cycle keys over all of S_n, cached per n.

    The enumeration is partitioned by the image of point 1; partitions are
    merged in ascending order.
    """
    if n in _tallies:
        return _tallies[n]
    workers = workers or settings.workers
    partials: dict[int, Counter] = {}
    if workers > 1 and n > 6:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(_tally_partition, n, first): first for first in range(n)}
            for fut in as_completed(futures):
                partials[futures[fut]] = fut.result()
    else:
        for first in range(n):
            partials[first] = _tally_partition(n, first)
    tally: Counter = Counter()
    for first in range(n):
        tally.update(partials[first])
    logger.debug("Enumerated S_%d: %d cycle keys", n, len(tally))
    _tallies[n] = tally
    return tally


def census_bruteforce(n: int, d: int, workers: int | None = None) -> DCycleCensus:
    """Classify all n! permutations of S_n by their d-cycles."""
    if not 1 <= n <= settings.census_cap:
        raise DegreeOutOfRangeError(f"enumeration needs 1 <= n <= {settings.census_cap}, got {n}")
    if not 1 <= d <= n:
        raise InvalidCycleLengthError(f"cycle length must satisfy 1 <= d <= n, got d={d}, n={n}")

    exactly = [0] * (n // d)
    plus = minus = b1 = b2 = 0
    for (lengths, through_first, through_second, same), count in census_tally(n, workers).items():
        j = lengths.count(d)
        if not j:
            continue
        exactly[j - 1] += count
        if (n - len(lengths)) % 2 == 0:
            plus += count
        else:
            minus += count
        if j == 1 and d in (through_first, through_second):
            b1 += count
        if j == 2 and through_first == d and through_second == d and not same:
            b2 += count
    return DCycleCensus(
        n=n,
        d=d,
        total=math.factorial(n),
        at_least_one=sum(exactly),
        exactly_j=tuple(exactly),
        plus=plus,
        minus=minus,
        special_b1=b1,
        special_b2=b2,
    )


def census_json(census: DCycleCensus) -> dict:
    """JSON object with every count as a decimal string."""
    return census.model_dump(mode="json")


# ---------------------------------------------------------------------------
# Closed formulas
# ---------------------------------------------------------------------------

def _gate(n: int, d: int) -> int:
    if d < 1:
        raise InvalidCycleLengthError(f"cycle length must be >= 1, got {d}")
    if n < 2 * d:
        raise PreconditionError(f"closed formulas need n >= 2d, got n={n}, d={d}")
    return n // d


def _as_count(value: Fraction) -> int:
    if value.denominator != 1:
        raise ExactnessError(f"count {value} is not an integer")
    return value.numerator


def count_at_least_one(n: int, d: int) -> int:
    """#A_n(d) = n! a(floor(n/d))."""
    i = _gate(n, d)
    return _as_count(math.factorial(n) * a_value(d, i))


def count_exactly_j(n: int, d: int, j: int) -> int:
    """#B_n(d, j) = n! b(floor(n/d), j)."""
    i = _gate(n, d)
    if not 1 <= j <= i:
        raise PreconditionError(f"j must satisfy 1 <= j <= {i}, got {j}")
    return _as_count(math.factorial(n) * b_value(d, i, j))


def _special_b1(n: int, d: int, i: int) -> Fraction:
    return math.factorial(n) * Fraction(2 * n - d - 1, n * (n - 1)) * (1 - a_value(d, i - 1))


def _special_b2(n: int, d: int, i: int) -> Fraction:
    return math.factorial(n) * Fraction(1, n * (n - 1)) * (1 - a_value(d, i - 2))


def count_special_b1(n: int, d: int) -> int:
    """Permutations with exactly one d-cycle, which contains 1 or 2."""
    return _as_count(_special_b1(n, d, _gate(n, d)))


def count_special_b2(n: int, d: int) -> int:
    """Permutations with exactly two d-cycles, one through 1 and the other through 2."""
    return _as_count(_special_b2(n, d, _gate(n, d)))


def signed_discrepancy_bound(n: int, d: int) -> Fraction:
    """Upper bound for |#A_n^+(d) - #A_n^-(d)|, at most n! * 2/(n-1)."""
    i = _gate(n, d)
    bound = _special_b1(n, d, i) + _special_b2(n, d, i)
    if bound > math.factorial(n) * Fraction(2, n - 1):
        raise ExactnessError(f"discrepancy bound exceeds n! 2/(n-1) for n={n}, d={d}")
    return bound


def relative_discrepancy_bound(n: int, d: int, enclosure_terms: int | None = None) -> Fraction:
    """Upper bound for |#A_n^+(d) - #A_n^-(d)| / #A_n(d), using floor(n/d)."""
    return signed_ratio_bound(n, d, _gate(n, d), enclosure_terms)


# ---------------------------------------------------------------------------
# Cycle-type classes
# ---------------------------------------------------------------------------

def cycle_type_count(lengths: tuple[int, ...]) -> int:
    """Size of the conjugacy class n! / prod(k^m_k m_k!)."""
    n = sum(lengths)
    denominator = 1
    for k, m in Counter(lengths).items():
        denominator *= k**m * math.factorial(m)
    return math.factorial(n) // denominator


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part, *rest)


def class_proportions(n: int) -> dict[tuple[int, ...], Fraction]:
    """Exact proportion of each cycle type in S_n."""
    if n < 1:
        raise DegreeOutOfRangeError(f"n must be >= 1, got {n}")
    total = math.factorial(n)
    return {lengths: Fraction(cycle_type_count(lengths), total) for lengths in _partitions(n)}


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _points_in_d_cycles(perms: np.ndarray, d: int) -> np.ndarray:
    """Boolean mask of the points lying in cycles of length exactly d."""
    batch, n = perms.shape
    rows = np.arange(batch)[:, None]
    identity = np.arange(n)
    fixed: dict[int, np.ndarray] = {}
    power = perms
    for k in range(1, d + 1):
        if k > 1:
            power = perms[rows, power]
        if d % k == 0:
            fixed[k] = power == identity
    mask = fixed[d].copy()
    for k, points in fixed.items():
        if k != d:
            mask &= ~points
    return mask


def monte_carlo_census(n: int, d: int, samples: int, seed: int | None = None) -> MonteCarloCensus:
    """Sample uniform permutations from a seeded Philox generator."""
    if n < 1:
        raise DegreeOutOfRangeError(f"n must be >= 1, got {n}")
    if not 1 <= d <= n:
        raise InvalidCycleLengthError(f"cycle length must satisfy 1 <= d <= n, got d={d}, n={n}")
    if samples < 1:
        raise PreconditionError(f"samples must be >= 1, got {samples}")
    seed = settings.seed if seed is None else seed

    rng = np.random.Generator(np.random.Philox(seed))
    batch = max(1, (1 << 20) // n)
    histogram = np.zeros(n // d + 1, dtype=np.int64)
    remaining = samples
    while remaining:
        size = min(batch, remaining)
        perms = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        cycles = _points_in_d_cycles(perms, d).sum(axis=1) // d
        histogram += np.bincount(cycles, minlength=n // d + 1)
        remaining -= size

    def estimate(count: int) -> ProportionEstimate:
        p = count / samples
        return ProportionEstimate(count=count, proportion=p, stderr=math.sqrt(p * (1 - p) / samples))

    hits = int(histogram[1:].sum())
    return MonteCarloCensus(
        n=n,
        d=d,
        samples=samples,
        seed=seed,
        at_least_one=estimate(hits),
        exactly_j=tuple(estimate(int(c)) for c in histogram[1:]),
    )
