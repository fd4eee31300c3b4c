import itertools
import math
import time
from fractions import Fraction

import pytest
from pydantic import ValidationError

from maeda_lab.combinatorics import permcycles
from maeda_lab.combinatorics.permcycles import (
    Permutation,
    census_bruteforce,
    census_json,
    census_tally,
    class_proportions,
    count_at_least_one,
    count_exactly_j,
    count_special_b1,
    count_special_b2,
    cycle_type,
    cycle_type_count,
    monte_carlo_census,
    relative_discrepancy_bound,
    signed_discrepancy_bound,
)
from maeda_lab.combinatorics.sequences import a_closed, a_value
from maeda_lab.errors import DegreeOutOfRangeError, InvalidCycleLengthError, PreconditionError


def _pairs(n_max):
    return [(n, d) for n in range(2, n_max + 1) for d in range(1, n // 2 + 1)]


def _assert_formulas_match(n, d):
    census = census_bruteforce(n, d)
    assert census.at_least_one == count_at_least_one(n, d)
    assert census.exactly_j == tuple(count_exactly_j(n, d, j) for j in range(1, n // d + 1))
    assert census.special_b1 == count_special_b1(n, d)
    assert census.special_b2 == count_special_b2(n, d)
    bound = signed_discrepancy_bound(n, d)
    assert abs(census.plus - census.minus) <= bound <= math.factorial(n) * Fraction(2, n - 1)


@pytest.mark.parametrize("n,d", _pairs(8))
def test_enumeration_matches_formulas(n, d):
    _assert_formulas_match(n, d)


@pytest.mark.slow
@pytest.mark.parametrize("d", range(1, 5))
def test_enumeration_matches_formulas_n9(d):
    _assert_formulas_match(9, d)


def test_s4_transposition_census():
    census = census_bruteforce(4, 2)
    assert census.at_least_one == 9
    assert census.exactly_j == (6, 3)
    assert (census.plus, census.minus) == (3, 6)
    assert census_json(census)["at_least_one"] == "9"


def test_census_below_2d_is_allowed_for_enumeration():
    census = census_bruteforce(3, 2)
    assert census.at_least_one == 3
    assert census.exactly_j == (3,)


def test_census_bounds_checked():
    with pytest.raises(DegreeOutOfRangeError):
        census_bruteforce(12, 2)
    with pytest.raises(InvalidCycleLengthError):
        census_bruteforce(4, 5)


def test_closed_formulas_need_n_at_least_2d():
    with pytest.raises(PreconditionError):
        count_at_least_one(3, 2)
    with pytest.raises(PreconditionError):
        count_exactly_j(6, 2, 4)


def test_parallel_tally_matches_serial(monkeypatch):
    monkeypatch.setattr(permcycles, "_tallies", {})
    serial = census_tally(7, workers=1)
    monkeypatch.setattr(permcycles, "_tallies", {})
    parallel = census_tally(7, workers=2)
    assert serial == parallel
    assert sum(serial.values()) == 5040


def test_relative_bound_dominates_enumeration():
    for n, d in [(6, 2), (8, 2), (9, 3)]:
        census = census_bruteforce(n, d)
        assert Fraction(abs(census.plus - census.minus), census.at_least_one) <= relative_discrepancy_bound(n, d)


def test_cycle_type_of_permutation():
    kind = cycle_type(Permutation(images=(2, 1, 3)))
    assert kind.lengths == (2, 1)
    assert kind.sign == -1
    assert cycle_type(Permutation(images=(2, 3, 4, 1))).lengths == (4,)


def test_cycle_type_orbits_of_two_cycles():
    kind = cycle_type(Permutation(images=(2, 3, 1, 5, 4)))
    assert kind.lengths == (3, 2)
    assert kind.sign == -1


def _inversion_sign(images):
    inversions = sum(1 for x, y in itertools.combinations(images, 2) if x > y)
    return -1 if inversions % 2 else 1


@pytest.mark.parametrize("n", range(1, 6))
def test_cycle_type_sign_is_inversion_parity(n):
    for images in itertools.permutations(range(1, n + 1)):
        assert cycle_type(Permutation(images=images)).sign == _inversion_sign(images)


@pytest.mark.parametrize("d", [1, 3])
def test_closed_formula_counts_scale_to_large_n(d):
    started = time.perf_counter()
    n = 800
    assert count_at_least_one(n, d) == math.factorial(n) * a_closed(d, n // d)
    i = n // d
    assert count_exactly_j(n, d, 5) == math.factorial(n) * (1 - a_closed(d, i - 5)) / (math.factorial(5) * d**5)
    assert time.perf_counter() - started < 5.0


def test_permutation_must_be_bijective():
    with pytest.raises(ValidationError):
        Permutation(images=(1, 1, 3))


def test_class_proportions_s3():
    assert class_proportions(3) == {
        (3,): Fraction(1, 3),
        (2, 1): Fraction(1, 2),
        (1, 1, 1): Fraction(1, 6),
    }


@pytest.mark.parametrize("n", range(1, 8))
def test_class_sizes_partition_sn(n):
    proportions = class_proportions(n)
    assert sum(proportions.values()) == 1
    tally = census_tally(n)
    by_type = {}
    for (lengths, *_), count in tally.items():
        by_type[lengths] = by_type.get(lengths, 0) + count
    assert by_type == {lengths: cycle_type_count(lengths) for lengths in proportions}


def test_monte_carlo_is_reproducible_and_close():
    first = monte_carlo_census(20, 3, 20000, seed=7)
    second = monte_carlo_census(20, 3, 20000, seed=7)
    assert first == second
    assert not first.guaranteed
    target = float(a_value(3, 6))
    assert abs(first.at_least_one.proportion - target) <= 5 * first.at_least_one.stderr + 1e-3
    assert sum(e.count for e in first.exactly_j) == first.at_least_one.count
