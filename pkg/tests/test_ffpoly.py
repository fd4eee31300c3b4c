import random
from collections import Counter

import pytest
from pydantic import ValidationError
from sympy import Poly, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_pow_mod, gf_rem

from maeda_lab.arithmetic.ffpoly import (
    MAX_PARSE_DEGREE,
    IntPolynomial,
    ModPolynomial,
    distinct_degree_profile,
    frobenius_power,
    mulmod,
    parse_polynomial,
    polynomial_gcd,
    profile_counts,
    reduce_mod_p,
)
from maeda_lab.arithmetic.primes import primes_upto
from maeda_lab.errors import (
    LeadingCoefficientVanishesError,
    NotSquarefreeError,
    PolynomialParseError,
    PreconditionError,
    ZeroPolynomialError,
)

x = symbols("x")

LARGE_PRIMES = [101, 2**61 - 1, 2**63 - 25]


def _mod(p, coeffs):
    return ModPolynomial(p=p, coeffs=tuple(coeffs))


def _random_mod(rng, p, degree, monic=False):
    coeffs = [rng.randrange(p) for _ in range(degree)] + [1 if monic else rng.randrange(1, p)]
    return coeffs


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "text,coeffs",
    [
        ("x^5-x-1", (-1, -1, 0, 0, 0, 1)),
        ("x^5 - x - 1", (-1, -1, 0, 0, 0, 1)),
        ("3*x**2 + 1", (1, 0, 3)),
        ("2x^3 - x", (0, -1, 0, 2)),
        ("-x^2+x^2+x", (0, 1)),
        ("-1,-1,0,0,0,1", (-1, -1, 0, 0, 0, 1)),
        ("x", (0, 1)),
        ("7", (7,)),
    ],
)
def test_parse(text, coeffs):
    assert parse_polynomial(text).coeffs == coeffs


@pytest.mark.parametrize("text", ["", "x^2+y", "0", "1,a,2", "x^^2", "0,0"])
def test_parse_rejects(text):
    with pytest.raises(PolynomialParseError):
        parse_polynomial(text)


def test_parse_rejects_huge_exponents():
    assert parse_polynomial(f"x^{MAX_PARSE_DEGREE} + 1").degree == MAX_PARSE_DEGREE
    with pytest.raises(PolynomialParseError):
        parse_polynomial("x^999999999 + 1")
    with pytest.raises(PolynomialParseError):
        parse_polynomial(",".join(["1"] * (MAX_PARSE_DEGREE + 2)))


def test_text_round_trip():
    for text in ["x^5 - x - 1", "x^3 - 2", "3*x^2 + 1", "-x^4 + 2*x"]:
        poly = parse_polynomial(text)
        assert poly.to_text() == text
        assert parse_polynomial(poly.to_text()) == poly


def test_int_polynomial_needs_leading_coefficient():
    with pytest.raises(ValidationError):
        IntPolynomial(coeffs=(1, 0))
    assert IntPolynomial(coeffs=(-2, 0, 0, 1)).is_monic


# ---------------------------------------------------------------------------
# Reduction and kernel
# ---------------------------------------------------------------------------

def test_reduce_mod_p():
    gaussian = IntPolynomial(coeffs=(1, 0, 1))
    assert reduce_mod_p(gaussian, 5).coeffs == (1, 0, 1)
    assert reduce_mod_p(IntPolynomial(coeffs=(-2, 0, 0, 1)), 7).coeffs == (5, 0, 0, 1)
    with pytest.raises(LeadingCoefficientVanishesError):
        reduce_mod_p(IntPolynomial(coeffs=(1, 0, 3)), 3)


def test_mod_polynomial_validation():
    with pytest.raises(ValidationError):
        ModPolynomial(p=5, coeffs=(5, 1))
    with pytest.raises(ValidationError):
        ModPolynomial(p=5, coeffs=(1, 0))


@pytest.mark.parametrize("p", LARGE_PRIMES)
def test_mulmod_matches_schoolbook(p):
    rng = random.Random(p)
    for _ in range(5):
        f = _random_mod(rng, p, 64, monic=True)
        g = _random_mod(rng, p, rng.randrange(1, 64))
        h = _random_mod(rng, p, rng.randrange(1, 64))
        expected = gf_rem(gf_mul(g[::-1], h[::-1], p, ZZ), f[::-1], p, ZZ)
        got = mulmod(_mod(p, g), _mod(p, h), _mod(p, f))
        assert list(got.coeffs) == [int(c) for c in expected[::-1]]


@pytest.mark.parametrize("p", LARGE_PRIMES)
def test_frobenius_power_matches_square_and_multiply(p):
    rng = random.Random(p + 1)
    f = _random_mod(rng, p, 9, monic=True)
    h = _random_mod(rng, p, 6)
    expected = gf_pow_mod(h[::-1], p, f[::-1], p, ZZ)
    got = frobenius_power(_mod(p, f), _mod(p, h))
    assert list(got.coeffs) == [int(c) for c in expected[::-1]]


def test_gcd_is_monic():
    # (x + 1)(x + 2) and (x + 1)(x + 3) over GF(7)
    g = polynomial_gcd(_mod(7, [2, 3, 1]), _mod(7, [3, 4, 1]))
    assert g.coeffs == (1, 1)
    assert polynomial_gcd(_mod(7, []), _mod(7, [2, 4])).coeffs == (4, 1)


# ---------------------------------------------------------------------------
# Distinct-degree factorization
# ---------------------------------------------------------------------------

def test_profiles_from_hand_factorizations():
    assert distinct_degree_profile(_mod(5, [1, 0, 1])) == ((1, 2),)
    assert distinct_degree_profile(_mod(3, [1, 0, 1])) == ((2, 1),)
    # 3^3 = 27 = 2 mod 5, and 2 is not a cube mod 7
    assert distinct_degree_profile(_mod(5, [3, 0, 0, 1])) == ((2, 1), (1, 1))
    assert distinct_degree_profile(_mod(7, [5, 0, 0, 1])) == ((3, 1),)


def _product_mod(p, *factors):
    # factors and result are constant-term first; galoistools wants leading term first
    acc = [1]
    for factor in factors:
        acc = gf_mul(acc, list(reversed(factor)), p, ZZ)
    return list(reversed(acc))


def test_profile_after_linear_factors_are_removed():
    # x^2 + 3 and x^3 + x + 1 are irreducible mod 5
    f = _product_mod(5, [4, 1], [3, 1], [3, 0, 1], [1, 1, 0, 1])
    assert distinct_degree_profile(_mod(5, f)) == ((3, 1), (2, 1), (1, 2))
    g = _product_mod(5, [4, 1], [3, 0, 1])
    assert distinct_degree_profile(_mod(5, g)) == ((2, 1), (1, 1))


def test_profile_errors():
    with pytest.raises(NotSquarefreeError):
        distinct_degree_profile(_mod(2, [1, 0, 1]))
    with pytest.raises(ZeroPolynomialError):
        distinct_degree_profile(_mod(5, []))
    with pytest.raises(PreconditionError):
        distinct_degree_profile(_mod(5, [1, 2]))
    with pytest.raises(NotSquarefreeError):
        # x^5 - x^0 over GF(5) is (x - 1)^5
        distinct_degree_profile(_mod(5, [4, 0, 0, 0, 0, 1]))


def test_profile_counts_flags_ramification():
    assert profile_counts((1, 0, 1), 2) is None
    assert profile_counts((1, 0, 3), 3) is None
    assert profile_counts((1, 0, 1), 13) == ((1, 2),)


def _roots(coeffs, p):
    return sum(1 for r in range(p) if sum(c * pow(r, k, p) for k, c in enumerate(coeffs)) % p == 0)


def test_linear_factors_match_root_counts():
    rng = random.Random(2024)
    for p in primes_upto(100):
        for _ in range(6):
            degree = rng.choice([1, 2, 3])
            coeffs = tuple(rng.randrange(-20, 21) for _ in range(degree)) + (1,)
            profile = profile_counts(coeffs, p)
            if profile is None:
                continue
            assert sum(deg * mult for deg, mult in profile) == degree
            assert dict(profile).get(1, 0) == _roots(coeffs, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 101, 65537])
def test_profile_matches_sympy_factorization(p):
    rng = random.Random(p)
    for _ in range(10):
        degree = rng.randrange(2, 12)
        coeffs = [rng.randrange(p) for _ in range(degree)] + [1]
        poly = Poly(list(reversed(coeffs)), x, modulus=p)
        factors = poly.factor_list()[1]
        if any(mult > 1 for _, mult in factors):
            with pytest.raises(NotSquarefreeError):
                distinct_degree_profile(_mod(p, coeffs))
            continue
        expected = Counter(factor.degree() for factor, _ in factors)
        assert distinct_degree_profile(_mod(p, coeffs)) == tuple(sorted(expected.items(), reverse=True))
