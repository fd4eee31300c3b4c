"""Polynomial arithmetic over Z and GF(p), and distinct-degree factorization.

Coefficient lists are stored constant term first. The GF(p) kernel works on
plain ``list[int]`` for speed; the pydantic types wrap it at the boundary.
Elements of GF(p)[x]/(f) are kept as dense lists of length deg f.

Only the degrees of the irreducible factors are computed (distinct-degree
factorization); by Dedekind's theorem they are the residue degrees of the
primes above p whenever the reduction is squarefree, and they equal the
cycle type of Frobenius on the roots.
"""

from __future__ import annotations

import re
from collections import defaultdict

from pydantic import Field, model_validator

from ..errors import (
    LeadingCoefficientVanishesError,
    NotSquarefreeError,
    PolynomialParseError,
    PreconditionError,
    ZeroPolynomialError,
)
from ..schemas import BigInt, LabModel

# one signed term: sign, optional coefficient, optional x with optional exponent
_TERM = re.compile(r"([+-])(\d*)(?:\*?(x)(?:\^(\d+))?)?")

# largest exponent parse_polynomial accepts
MAX_PARSE_DEGREE = 4096

Profile = tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class IntPolynomial(LabModel):
    """Polynomial over Z, constant term first, nonzero leading coefficient."""

    coeffs: tuple[BigInt, ...]

    @model_validator(mode="after")
    def _leading(self) -> "IntPolynomial":
        if not self.coeffs or self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        return self

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        """Human form, e.g. ``x^5 - x - 1``."""
        parts = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if not c:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                var = "x" if power == 1 else f"x^{power}"
                body = var if magnitude == 1 else f"{magnitude}*{var}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(parts)


class ModPolynomial(LabModel):
    """Polynomial over GF(p); empty coefficients denote the zero polynomial."""

    p: int = Field(ge=2, lt=2**64)
    coeffs: tuple[int, ...]

    @model_validator(mode="after")
    def _reduced(self) -> "ModPolynomial":
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise ValueError("coefficients must lie in [0, p)")
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        return self

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


# ---------------------------------------------------------------------------
# GF(p) kernel
# ---------------------------------------------------------------------------

def _trim(c: list[int]) -> list[int]:
    while c and not c[-1]:
        c.pop()
    return c


def _rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by a nonzero trimmed b."""
    r = [x % p for x in a]
    _trim(r)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    while len(r) - 1 >= db:
        coef = r[-1] * inv % p
        shift = len(r) - 1 - db
        for k in range(db):
            r[shift + k] = (r[shift + k] - coef * b[k]) % p
        r.pop()
        _trim(r)
    return r


def _divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    r = [x % p for x in a]
    _trim(r)
    db = len(b) - 1
    q = [0] * max(len(r) - db, 0)
    inv = pow(b[-1], -1, p)
    while len(r) - 1 >= db:
        coef = r[-1] * inv % p
        shift = len(r) - 1 - db
        q[shift] = coef
        for k in range(db):
            r[shift + k] = (r[shift + k] - coef * b[k]) % p
        r.pop()
        _trim(r)
    return q, r


def _monic(c: list[int], p: int) -> list[int]:
    inv = pow(c[-1], -1, p)
    return [x * inv % p for x in c]


def _gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd in GF(p)[x]; [] when both are zero."""
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _rem(a, b, p)
    return _monic(a, p) if a else a


def _derivative(c: list[int], p: int) -> list[int]:
    return _trim([k * c[k] % p for k in range(1, len(c))])


def _mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    """a * b mod f for dense a, b of length n = deg f and monic f."""
    n = len(f) - 1
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _reduce_dense(prod, f, p)


def _reduce_dense(prod: list[int], f: list[int], p: int) -> list[int]:
    n = len(f) - 1
    for top in range(len(prod) - 1, n - 1, -1):
        coef = prod[top] % p
        if coef:
            shift = top - n
            for k in range(n):
                prod[shift + k] -= coef * f[k]
    return [x % p for x in prod[:n]]


def _times_x(a: list[int], f: list[int], p: int) -> list[int]:
    n = len(f) - 1
    top = a[-1]
    shifted = [0, *a[:-1]]
    if top:
        shifted = [(shifted[k] - top * f[k]) % p for k in range(n)]
    return shifted


def _dense(c: list[int], n: int) -> list[int]:
    return c + [0] * (n - len(c))


def _x_power(e: int, f: list[int], p: int) -> list[int]:
    """x^e mod monic f by left-to-right square-and-multiply."""
    n = len(f) - 1
    result = _dense([1], n)
    for bit in bin(e)[2:]:
        result = _mulmod(result, result, f, p)
        if bit == "1":
            result = _times_x(result, f, p)
    return result


def _frobenius_base(f: list[int], p: int) -> list[list[int]]:
    """[x^(i*p) mod f for i < deg f]."""
    n = len(f) - 1
    base = [_dense([1], n)]
    if n > 1:
        xp = _x_power(p, f, p)
        base.append(xp)
        for _ in range(2, n):
            base.append(_mulmod(base[-1], xp, f, p))
    return base


def _frobenius_map(g: list[int], base: list[list[int]], p: int) -> list[int]:
    """g^p mod f = sum g_j x^(j p), since g_j^p = g_j in GF(p)."""
    n = len(base)
    acc = [0] * n
    for j, gj in enumerate(g):
        if gj:
            for k, bk in enumerate(base[j]):
                acc[k] += gj * bk
    return [x % p for x in acc]


def _ddf_counts(f: list[int], p: int) -> dict[int, int]:
    """Degree -> number of irreducible factors, for monic squarefree f."""
    counts: dict[int, int] = {}
    n = len(f) - 1
    if n == 1:
        return {1: 1}
    base = _frobenius_base(f, p)
    h = base[1]
    i = 1
    while 2 * i <= len(f) - 1:
        diff = list(h)
        diff[1] = (diff[1] - 1) % p
        g = _gcd(f, diff, p)
        if len(g) > 1:
            counts[i] = (len(g) - 1) // i
            f, _ = _divmod(f, g, p)
            if len(f) == 1:
                break
            m = len(f) - 1
            # x^(j p) mod f is the old base entry reduced by the new f
            h = _dense(_rem(h, f, p), m)
            base = [_dense(_rem(b, f, p), m) for b in base[:m]]
        i += 1
        h = _frobenius_map(h, base, p)
    if len(f) > 1:
        counts[len(f) - 1] = counts.get(len(f) - 1, 0) + 1
    return counts


def profile_counts(coeffs: tuple[int, ...], p: int) -> Profile | None:
    """Factor-degree profile of monic ``coeffs`` mod p, or None when the
    reduction is not squarefree (ramified, or p | leading coefficient)."""
    if coeffs[-1] % p == 0:
        return None
    f = _monic([c % p for c in coeffs], p)
    if len(f) == 1:
        return ()
    if len(_gcd(f, _derivative(f, p), p)) != 1:
        return None
    return tuple(sorted(_ddf_counts(f, p).items(), reverse=True))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def reduce_mod_p(f: IntPolynomial, p: int) -> ModPolynomial:
    """Coefficientwise reduction; the leading coefficient must survive."""
    if f.coeffs[-1] % p == 0:
        raise LeadingCoefficientVanishesError(f"leading coefficient of {f} vanishes mod {p}")
    return ModPolynomial(p=p, coeffs=tuple(c % p for c in f.coeffs))


def mulmod(g: ModPolynomial, h: ModPolynomial, f: ModPolynomial) -> ModPolynomial:
    """g * h mod f via the dense quotient-ring kernel; f must be monic."""
    if not (g.p == h.p == f.p):
        raise PreconditionError("operands live over different primes")
    if f.degree < 1 or f.coeffs[-1] != 1:
        raise PreconditionError("modulus must be monic of degree >= 1")
    n, p = f.degree, f.p
    a = _dense(_rem(list(g.coeffs), list(f.coeffs), p), n)
    b = _dense(_rem(list(h.coeffs), list(f.coeffs), p), n)
    return ModPolynomial(p=p, coeffs=tuple(_trim(_mulmod(a, b, list(f.coeffs), p))))


def polynomial_gcd(g: ModPolynomial, h: ModPolynomial) -> ModPolynomial:
    if g.p != h.p:
        raise PreconditionError("operands live over different primes")
    return ModPolynomial(p=g.p, coeffs=tuple(_gcd(list(g.coeffs), list(h.coeffs), g.p)))


def frobenius_power(g: ModPolynomial, h: ModPolynomial) -> ModPolynomial:
    """h^p mod g through the monomial base x^(i p) mod g; g monic."""
    if h.p != g.p:
        raise PreconditionError("operands live over different primes")
    if g.degree < 1 or g.coeffs[-1] != 1:
        raise PreconditionError("modulus must be monic of degree >= 1")
    p, f = g.p, list(g.coeffs)
    base = _frobenius_base(f, p)
    reduced = _dense(_rem(list(h.coeffs), f, p), g.degree)
    return ModPolynomial(p=p, coeffs=tuple(_trim(_frobenius_map(reduced, base, p))))


def distinct_degree_profile(g: ModPolynomial) -> Profile:
    """(degree, count) pairs of the irreducible factors of a monic squarefree g,
    largest degree first."""
    if not g.coeffs:
        raise ZeroPolynomialError("distinct-degree factorization of the zero polynomial")
    if g.degree < 1:
        raise PreconditionError("polynomial must have degree >= 1")
    if g.coeffs[-1] != 1:
        raise PreconditionError("polynomial must be monic")
    f = list(g.coeffs)
    if len(_gcd(f, _derivative(f, g.p), g.p)) != 1:
        raise NotSquarefreeError(f"polynomial is not squarefree mod {g.p}")
    return tuple(sorted(_ddf_counts(f, g.p).items(), reverse=True))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_polynomial(text: str) -> IntPolynomial:
    """Parse "c0,c1,...,cn" or a human form such as "x^5-x-1" or "3*x**2 + 1"."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise PolynomialParseError("empty polynomial")
    if "x" not in s:
        try:
            coeffs = [int(part) for part in s.split(",")]
        except ValueError as exc:
            raise PolynomialParseError(f"bad coefficient list {text!r}") from exc
    else:
        if s[0] not in "+-":
            s = "+" + s
        terms: dict[int, int] = defaultdict(int)
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise PolynomialParseError(f"cannot parse {text!r} at position {pos}")
            sign, digits, var, exponent = m.groups()
            coef = int(digits) if digits else 1
            power = (int(exponent) if exponent else 1) if var else 0
            if power > MAX_PARSE_DEGREE:
                raise PolynomialParseError(f"exponent {power} exceeds {MAX_PARSE_DEGREE} in {text!r}")
            terms[power] += -coef if sign == "-" else coef
            pos = m.end()
        coeffs = [terms.get(k, 0) for k in range(max(terms) + 1)]
    _trim(coeffs)
    if not coeffs:
        raise PolynomialParseError(f"{text!r} is the zero polynomial")
    if len(coeffs) - 1 > MAX_PARSE_DEGREE:
        raise PolynomialParseError(f"degree {len(coeffs) - 1} exceeds {MAX_PARSE_DEGREE}")
    return IntPolynomial(coeffs=tuple(coeffs))
