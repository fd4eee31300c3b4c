"""The sequences a(i), b(i, j) and the convergence machinery built on them.

a(i) is the proportion of permutations of S_n (n >= 2d, i = floor(n/d))
containing at least one d-cycle; b(i, j) the proportion containing exactly j
of them. Both are computed exactly with ``fractions.Fraction``.

exp(-1/d) never enters a guaranteed computation as a float: 1 - exp(-1/d) is
enclosed by consecutive partial sums of its alternating series, whose terms
1/(j! d^j) decrease strictly, so the limit always lies between S_m and
S_{m+1}.

``include_exclude_step`` evaluates c + a - (1 + delta) a c at the four
corners of the box c_prev x [-bound, bound]. The expression is affine in c
for fixed delta and affine in delta for fixed c, so its extrema over the box
are attained at corners and the corner hull is the exact image.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from pydantic import Field, model_validator

from ..config import settings
from ..errors import (
    ExactnessError,
    InvalidCycleLengthError,
    NonpositiveDenominatorError,
    PreconditionError,
)
from ..schemas import LabModel, Rational, RationalInterval

if TYPE_CHECKING:
    from .permcycles import DCycleCensus

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class MaedaSequence(LabModel):
    """Exact table of a(0..i_max) and the triangle b(i, j), 1 <= j <= i."""

    d: int = Field(ge=1)
    a: tuple[Rational, ...]
    # b[i - 1][j - 1] holds b(i, j)
    b: tuple[tuple[Rational, ...], ...]

    @model_validator(mode="after")
    def _shape(self) -> "MaedaSequence":
        if not self.a or self.a[0] != 0:
            raise ValueError("a(0) must be 0")
        if len(self.b) != len(self.a) - 1:
            raise ValueError("b must have one row per i >= 1")
        for i, row in enumerate(self.b, start=1):
            if len(row) != i:
                raise ValueError(f"row b({i}, .) must have {i} entries")
        return self

    @property
    def i_max(self) -> int:
        return len(self.a) - 1

    def value_b(self, i: int, j: int) -> Fraction:
        return self.b[i - 1][j - 1]

    def a_floats(self) -> list[float]:
        """Float mirror of ``a``; not guaranteed."""
        return [float(x) for x in self.a]


class ConvergenceTrace(LabModel):
    """Iterates of an inclusion-exclusion recursion, index 0 = start value."""

    terms: tuple[Rational, ...]
    a_terms: tuple[Rational, ...]
    delta_terms: tuple[Rational, ...] | None = None
    gamma: Rational | None = None
    # r_n = 1 - gamma * b_n, present for part (a) traces
    residuals: tuple[Rational, ...] | None = None


# ---------------------------------------------------------------------------
# a(i), b(i, j)
# ---------------------------------------------------------------------------

def _check_d(d: int) -> None:
    if d < 1:
        raise InvalidCycleLengthError(f"cycle length must be >= 1, got {d}")


def a_recursive(d: int, i_max: int) -> MaedaSequence:
    """Fill a and b by the mutual recursion a(0) = 0,
    b(i, j) = (1 - a(i - j)) / (j! d^j), a(i) = sum_k b(i, k)."""
    _check_d(d)
    if i_max < 0:
        raise PreconditionError(f"i_max must be >= 0, got {i_max}")
    a, b = _recursive_table(d, _bucket(i_max))
    return MaedaSequence(d=d, a=a[: i_max + 1], b=b[:i_max])


def _bucket(i: int) -> int:
    # tables are cached per d in blocks of 64 indices
    return (i // 64 + 1) * 64


@lru_cache(maxsize=64)
def _recursive_table(d: int, i_max: int) -> tuple[tuple[Fraction, ...], tuple[tuple[Fraction, ...], ...]]:
    weights = [Fraction(1, math.factorial(j) * d**j) for j in range(i_max + 1)]
    a = [Fraction(0)]
    b: list[tuple[Fraction, ...]] = []
    for i in range(1, i_max + 1):
        row = tuple(weights[j] * (1 - a[i - j]) for j in range(1, i + 1))
        b.append(row)
        a.append(sum(row, Fraction(0)))
    return tuple(a), tuple(b)


def a_value(d: int, i: int) -> Fraction:
    """a(i) from cached partial sums of the closed form."""
    _check_d(d)
    if i < 0:
        raise PreconditionError(f"index must be >= 0, got {i}")
    return _closed_prefix(d, _bucket(i))[i]


def b_value(d: int, i: int, j: int) -> Fraction:
    """b(i, j) = (1 - a(i - j)) / (j! d^j)."""
    _check_d(d)
    if not 1 <= j <= i:
        raise PreconditionError(f"b({i}, {j}) needs 1 <= j <= i")
    return (1 - a_value(d, i - j)) / (math.factorial(j) * d**j)


@lru_cache(maxsize=64)
def _closed_prefix(d: int, i_max: int) -> tuple[Fraction, ...]:
    sums = [Fraction(0)]
    term = Fraction(-1)
    for j in range(1, i_max + 1):
        term = -term / (j * d)
        sums.append(sums[-1] + term)
    return tuple(sums)


def a_closed(d: int, i: int) -> Fraction:
    """sum_{j=1..i} (-1)^(j+1) / (j! d^j)."""
    _check_d(d)
    if i < 0:
        raise PreconditionError(f"index must be >= 0, got {i}")
    total = Fraction(0)
    term = Fraction(-1)
    for j in range(1, i + 1):
        term = -term / (j * d)
        total += term
    return total


# ---------------------------------------------------------------------------
# Enclosures of 1 - exp(-1/d) and the error terms
# ---------------------------------------------------------------------------

def limit_enclosure(d: int, precision_terms: int) -> RationalInterval:
    """Bracket 1 - exp(-1/d) between the partial sums S_m and S_{m+1},
    m = precision_terms; the width is 1/((m+1)! d^(m+1))."""
    _check_d(d)
    if precision_terms < 1:
        raise PreconditionError(f"precision_terms must be >= 1, got {precision_terms}")
    return _enclosure(d, precision_terms)


@lru_cache(maxsize=256)
def _enclosure(d: int, m: int) -> RationalInterval:
    s_m = a_closed(d, m)
    s_next = s_m + Fraction((-1) ** m, math.factorial(m + 1) * d ** (m + 1))
    return RationalInterval(lo=min(s_m, s_next), hi=max(s_m, s_next))


def limit_float(d: int) -> float:
    """Float mirror of 1 - exp(-1/d); not guaranteed."""
    return -math.expm1(-1.0 / d)


def tail_bound(d: int, i: int) -> Fraction:
    """2 / ((i+1)! d^(i+1)), an upper bound for |a(i) - (1 - exp(-1/d))|."""
    _check_d(d)
    if i < 0:
        raise PreconditionError(f"index must be >= 0, got {i}")
    return Fraction(2, math.factorial(i + 1) * d ** (i + 1))


def signed_ratio_bound(n: int, d: int, index: int, enclosure_terms: int | None = None) -> Fraction:
    """Rational upper bound for (1/(n-1)) * 2 / (1 - exp(-1/d) - 2/((index+1)! d^(index+1))).

    The true limit is replaced by the lower end of its enclosure, which only
    shrinks the denominator.
    """
    terms = enclosure_terms or settings.enclosure_terms
    denominator = limit_enclosure(d, terms).lo - tail_bound(d, index)
    if denominator <= 0:
        raise NonpositiveDenominatorError(
            f"lower bound of the denominator is {denominator} for n={n}, d={d}; "
            "raise enclosure_terms or n"
        )
    return Fraction(2, n - 1) / denominator


def delta_bound(d: int, n: int, enclosure_terms: int | None = None) -> Fraction:
    """Upper bound for |delta| in a + c - (1 + delta) a c, using ceil(n/d)."""
    _check_d(d)
    if n < max(5, 2 * d):
        raise PreconditionError(f"delta bound needs n >= max(5, 2d), got n={n}, d={d}")
    return signed_ratio_bound(n, d, -(-n // d), enclosure_terms)


def exact_delta(census: "DCycleCensus", c_plus: int, c_minus: int) -> Fraction:
    """delta for a quadratic intersection, from the sign split of a census
    and the split #C+ / #C- of the other field's subset."""
    if c_plus < 0 or c_minus < 0 or c_plus + c_minus == 0:
        raise PreconditionError("C must be a nonempty set with nonnegative split")
    if census.at_least_one == 0:
        raise PreconditionError("census has no d-cycles")
    return Fraction(c_plus - c_minus, c_plus + c_minus) * Fraction(
        census.plus - census.minus, census.at_least_one
    )


# ---------------------------------------------------------------------------
# Inclusion-exclusion recursion
# ---------------------------------------------------------------------------

def include_exclude_step(
    c_prev: RationalInterval, a: Fraction, delta_abs_bound: Fraction
) -> RationalInterval:
    """Exact image of (c, delta) -> c + a - (1 + delta) a c over
    c in c_prev, |delta| <= delta_abs_bound, intersected with [0, 1]."""
    a = Fraction(a)
    delta_abs_bound = Fraction(delta_abs_bound)
    if not 0 <= a <= 1:
        raise PreconditionError(f"a must lie in [0, 1], got {a}")
    if c_prev.lo < 0 or c_prev.hi > 1:
        raise PreconditionError(f"c_prev must lie in [0, 1], got [{c_prev.lo}, {c_prev.hi}]")
    if delta_abs_bound < 0:
        raise PreconditionError("delta bound must be nonnegative")
    corners = [
        c + a - (1 + delta) * a * c
        for c in (c_prev.lo, c_prev.hi)
        for delta in (-delta_abs_bound, delta_abs_bound)
    ]
    return RationalInterval(lo=min(corners), hi=max(corners)).clip_unit()


def converge_part_a(b0: Fraction, gamma: Fraction, a_terms: Sequence[Fraction]) -> ConvergenceTrace:
    """Iterate b_n = b_{n-1} + a_n - gamma b_{n-1} a_n and check
    1 - gamma b_n = (1 - gamma b0) prod (1 - gamma a_i) at every step."""
    b0, gamma = Fraction(b0), Fraction(gamma)
    a_terms = tuple(Fraction(x) for x in a_terms)
    if gamma <= 0:
        raise PreconditionError(f"gamma must be positive, got {gamma}")
    for n, a in enumerate(a_terms, start=1):
        if a < 0 or a * gamma >= 1:
            raise PreconditionError(f"a_{n} = {a} must satisfy 0 <= a_n < 1/gamma")

    start_residual = 1 - gamma * b0
    product = Fraction(1)
    terms, residuals = [b0], [start_residual]
    b = b0
    for a in a_terms:
        b = b + a - gamma * b * a
        product *= 1 - gamma * a
        residual = 1 - gamma * b
        if residual != start_residual * product:
            raise ExactnessError(f"residual identity failed at step {len(terms)}")
        terms.append(b)
        residuals.append(residual)
    return ConvergenceTrace(terms=terms, a_terms=a_terms, gamma=gamma, residuals=residuals)


def converge_part_b(
    c0: Fraction, a_terms: Sequence[Fraction], delta_terms: Sequence[Fraction]
) -> ConvergenceTrace:
    """Iterate the modified inclusion-exclusion sequence
    c_n = c_{n-1} + a_n - (1 + delta_n) c_{n-1} a_n."""
    a_terms = tuple(Fraction(x) for x in a_terms)
    delta_terms = tuple(Fraction(x) for x in delta_terms)
    if len(a_terms) != len(delta_terms):
        raise PreconditionError("a_terms and delta_terms must have the same length")
    if any(a < 0 for a in a_terms):
        raise PreconditionError("a_terms must be nonnegative")
    c = Fraction(c0)
    terms = [c]
    for a, delta in zip(a_terms, delta_terms):
        c = c + a - (1 + delta) * c * a
        terms.append(c)
    return ConvergenceTrace(terms=terms, a_terms=a_terms, delta_terms=delta_terms)


def comparison_sandwich(
    c_start: Fraction, a_terms: Sequence[Fraction], epsilon: Fraction
) -> tuple[ConvergenceTrace, ConvergenceTrace]:
    """The comparison sequences with gamma = 1 + epsilon (lower) and
    gamma = 1 - epsilon (upper), both started at c_start."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1), got {epsilon}")
    lower = converge_part_a(c_start, 1 + epsilon, a_terms)
    upper = converge_part_a(c_start, 1 - epsilon, a_terms)
    return lower, upper


# ---------------------------------------------------------------------------
# CSV rows
# ---------------------------------------------------------------------------

def sequence_rows(seq: MaedaSequence) -> list[dict[str, str]]:
    """Rows i, a_num, a_den, a_float for a sequence dump."""
    return [
        {
            "i": str(i),
            "a_num": str(value.numerator),
            "a_den": str(value.denominator),
            "a_float": repr(float(value)),
        }
        for i, value in enumerate(seq.a)
    ]
