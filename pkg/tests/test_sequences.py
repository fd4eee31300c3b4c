import itertools
from fractions import Fraction

import pytest

from maeda_lab.combinatorics.permcycles import census_bruteforce, relative_discrepancy_bound
from maeda_lab.combinatorics.sequences import (
    a_closed,
    a_recursive,
    a_value,
    b_value,
    comparison_sandwich,
    converge_part_a,
    converge_part_b,
    delta_bound,
    exact_delta,
    include_exclude_step,
    limit_enclosure,
    limit_float,
    sequence_rows,
    signed_ratio_bound,
    tail_bound,
)
from maeda_lab.errors import (
    ExactnessError,
    InvalidCycleLengthError,
    NonpositiveDenominatorError,
    PreconditionError,
)
from maeda_lab.schemas import RationalInterval


@pytest.mark.parametrize("d", range(1, 9))
def test_recursion_matches_closed_form(d):
    seq = a_recursive(d, 40)
    assert all(seq.a[i] == a_closed(d, i) for i in range(41))


def test_small_values():
    assert a_value(2, 1) == Fraction(1, 2)
    assert a_value(2, 2) == Fraction(3, 8)
    assert a_value(2, 3) == Fraction(19, 48)
    assert a_value(3, 1) == Fraction(1, 3)


def test_b_rows_sum_to_a():
    seq = a_recursive(3, 12)
    for i in range(1, 13):
        assert sum(seq.b[i - 1]) == seq.a[i]
        assert seq.value_b(i, 1) == b_value(3, i, 1)


def test_imax_zero_is_single_row():
    seq = a_recursive(2, 0)
    assert seq.a == (0,)
    assert seq.b == ()
    assert sequence_rows(seq) == [{"i": "0", "a_num": "0", "a_den": "1", "a_float": "0.0"}]


def test_invalid_d():
    with pytest.raises(InvalidCycleLengthError):
        a_recursive(0, 5)


@pytest.mark.parametrize("d", range(1, 9))
def test_tail_bound_holds_against_enclosure(d):
    enclosure = limit_enclosure(d, 30)
    for i in range(21):
        a = a_value(d, i)
        worst = max(abs(a - enclosure.lo), abs(a - enclosure.hi))
        assert worst <= tail_bound(d, i)


def test_enclosure_width_and_float_mirror():
    enclosure = limit_enclosure(2, 10)
    assert enclosure.width == Fraction(1, 39916800 * 2**11)
    assert abs(float(enclosure.lo) - limit_float(2)) < 1e-9


def test_signed_ratio_bound_denominator_guard():
    with pytest.raises(NonpositiveDenominatorError):
        signed_ratio_bound(2, 1, 0, 30)


def test_delta_bound_requires_large_n():
    with pytest.raises(PreconditionError):
        delta_bound(2, 4)


@pytest.mark.parametrize("n,d", [(5, 2), (6, 2), (6, 3), (7, 2), (7, 3), (8, 2), (8, 4)])
def test_delta_bound_dominates_exact_delta(n, d):
    census = census_bruteforce(n, d)
    bound = delta_bound(d, n)
    relative = relative_discrepancy_bound(n, d)
    assert Fraction(abs(census.plus - census.minus), census.at_least_one) <= relative
    for c_plus, c_minus in itertools.product(range(4), repeat=2):
        if c_plus + c_minus:
            assert abs(exact_delta(census, c_plus, c_minus)) <= bound


def test_step_is_exact_corner_hull():
    box = include_exclude_step(RationalInterval.point(0), Fraction(3, 8), Fraction(1, 2))
    assert box == RationalInterval.point(Fraction(3, 8))
    wide = include_exclude_step(RationalInterval.point(Fraction(3, 8)), Fraction(1, 2), Fraction(1, 10))
    # c + a - (1 + delta) a c at delta = +-1/10
    assert wide.lo == Fraction(3, 8) + Fraction(1, 2) - Fraction(11, 10) * Fraction(3, 16)
    assert wide.hi == Fraction(3, 8) + Fraction(1, 2) - Fraction(9, 10) * Fraction(3, 16)


def test_step_preconditions():
    with pytest.raises(PreconditionError):
        include_exclude_step(RationalInterval.point(0), Fraction(3, 2), Fraction(0))
    with pytest.raises(PreconditionError):
        include_exclude_step(RationalInterval.point(0), Fraction(1, 2), Fraction(-1))


def _unit_boxes():
    points = [Fraction(k, 6) for k in range(7)]
    return [RationalInterval(lo=lo, hi=hi) for lo, hi in itertools.combinations_with_replacement(points, 2)]


@pytest.mark.parametrize("a", [Fraction(0), Fraction(3, 8), Fraction(19, 48), Fraction(1)])
def test_step_is_monotone_in_box_and_delta(a):
    boxes = _unit_boxes()
    bounds = [Fraction(0), Fraction(1, 20), Fraction(1, 4)]
    for inner, outer in itertools.product(boxes, repeat=2):
        if not outer.includes(inner):
            continue
        for small, large in itertools.combinations_with_replacement(bounds, 2):
            image = include_exclude_step(inner, a, small)
            assert include_exclude_step(outer, a, small).includes(image)
            assert include_exclude_step(inner, a, large).includes(image)


@pytest.mark.parametrize("d", [1, 2, 5])
def test_enclosures_nest_as_terms_grow(d):
    enclosures = [limit_enclosure(d, m) for m in range(1, 25)]
    for coarse, fine in zip(enclosures, enclosures[1:]):
        assert coarse.includes(fine)
        assert fine.width < coarse.width


def test_part_a_residual_halves():
    trace = converge_part_a(Fraction(0), Fraction(1), [Fraction(1, 2)] * 60)
    assert all(r == Fraction(1, 2**n) for n, r in enumerate(trace.residuals))


def test_part_a_fixed_point_is_stationary():
    trace = converge_part_a(Fraction(1, 2), Fraction(2), [Fraction(1, 3)] * 10)
    assert set(trace.terms) == {Fraction(1, 2)}


def test_part_a_rejects_large_terms():
    with pytest.raises(PreconditionError):
        converge_part_a(Fraction(0), Fraction(2), [Fraction(1, 2)])


def test_part_b_with_zero_delta_matches_residual_product():
    a_terms = [Fraction(1, k + 2) for k in range(8)]
    trace = converge_part_b(Fraction(0), a_terms, [Fraction(0)] * 8)
    product = Fraction(1)
    for a in a_terms:
        product *= 1 - a
    assert trace.terms[-1] == 1 - product


def test_comparison_sandwich_brackets_perturbed_sequence():
    epsilon = Fraction(1, 10)
    a_terms = [Fraction(1, 4)] * 12
    deltas = [epsilon if n % 2 else -epsilon / 2 for n in range(12)]
    lower, upper = comparison_sandwich(Fraction(0), a_terms, epsilon)
    middle = converge_part_b(Fraction(0), a_terms, deltas)
    for lo, c, hi in zip(lower.terms, middle.terms, upper.terms):
        assert 0 <= lo <= c <= hi


def test_exactness_error_is_not_a_value_error():
    assert not issubclass(ExactnessError, ValueError)
