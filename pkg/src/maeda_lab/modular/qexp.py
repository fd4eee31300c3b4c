"""Truncated q-expansions of level-1 modular forms with integer coefficients."""

from __future__ import annotations

from pydantic import Field, model_validator

from ..errors import ExactnessError, PreconditionError
from ..schemas import BigInt, LabModel


class QExpansion(LabModel):
    """a_0 + a_1 q + ... + a_prec q^prec + O(q^(prec+1))."""

    weight: int = Field(ge=0)
    coeffs: tuple[BigInt, ...]
    prec: int = Field(ge=0)

    @model_validator(mode="after")
    def _length(self) -> "QExpansion":
        if self.weight % 2:
            raise ValueError("level-1 weights are even")
        if len(self.coeffs) != self.prec + 1:
            raise ValueError("coeffs must hold a_0..a_prec")
        return self

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise PreconditionError("only forms of equal weight can be added")
        prec = min(self.prec, other.prec)
        return QExpansion(
            weight=self.weight,
            coeffs=tuple(x + y for x, y in zip(self.coeffs[: prec + 1], other.coeffs[: prec + 1])),
            prec=prec,
        )

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        prec = min(self.prec, other.prec)
        return QExpansion(
            weight=self.weight + other.weight,
            coeffs=tuple(series_mul(self.coeffs, other.coeffs, prec)),
            prec=prec,
        )

    def scale(self, c: int) -> "QExpansion":
        return QExpansion(weight=self.weight, coeffs=tuple(c * x for x in self.coeffs), prec=self.prec)

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise PreconditionError(f"cannot raise precision from {self.prec} to {prec}")
        return QExpansion(weight=self.weight, coeffs=self.coeffs[: prec + 1], prec=prec)


def series_mul(a, b, prec: int) -> list[int]:
    """Product of two power series truncated after q^prec."""
    out = [0] * (prec + 1)
    for i, ai in enumerate(a[: prec + 1]):
        if ai:
            for j, bj in enumerate(b[: prec + 1 - i]):
                out[i + j] += ai * bj
    return out


def series_pow(a, e: int, prec: int) -> list[int]:
    result = [1] + [0] * prec
    base = list(a[: prec + 1])
    while e:
        if e & 1:
            result = series_mul(result, base, prec)
        e >>= 1
        if e:
            base = series_mul(base, base, prec)
    return result


def divisor_power_sums(r: int, n_max: int) -> list[int]:
    """sigma_r(n) for n = 0..n_max (index 0 unused), by a divisor sieve."""
    sigma = [0] * (n_max + 1)
    for m in range(1, n_max + 1):
        power = m**r
        for n in range(m, n_max + 1, m):
            sigma[n] += power
    return sigma


_EISENSTEIN = {4: (240, 3), 6: (-504, 5)}


def eisenstein(weight: int, prec: int) -> QExpansion:
    """E_4 = 1 + 240 sum sigma_3(n) q^n and E_6 = 1 - 504 sum sigma_5(n) q^n."""
    if weight not in _EISENSTEIN:
        raise PreconditionError(f"only E_4 and E_6 are generators, got weight {weight}")
    if prec < 1:
        raise PreconditionError(f"precision must be >= 1, got {prec}")
    factor, r = _EISENSTEIN[weight]
    sigma = divisor_power_sums(r, prec)
    return QExpansion(weight=weight, coeffs=(1, *(factor * s for s in sigma[1:])), prec=prec)


def delta_form(prec: int) -> QExpansion:
    """Delta = (E_4^3 - E_6^2) / 1728."""
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    numerator = (e4 * e4 * e4) + (e6 * e6).scale(-1)
    coeffs = []
    for c in numerator.coeffs:
        q, r = divmod(c, 1728)
        if r:
            raise ExactnessError("E_4^3 - E_6^2 is not divisible by 1728")
        coeffs.append(q)
    return QExpansion(weight=12, coeffs=tuple(coeffs), prec=prec)


def tau(n_max: int) -> list[int]:
    """[tau(1), ..., tau(n_max)] from q prod (1 - q^n)^24."""
    if n_max < 1:
        raise PreconditionError(f"n_max must be >= 1, got {n_max}")
    prec = n_max - 1
    euler = [1] + [0] * prec
    for n in range(1, prec + 1):
        for m in range(prec, n - 1, -1):
            euler[m] -= euler[m - n]
    return series_pow(euler, 24, prec)
