"""Pydantic schemas shared by every module.

Exact rationals travel as ``fractions.Fraction`` and serialize to JSON as
``{"num": "...", "den": "..."}`` decimal strings; big integers serialize as
decimal strings since most counts exceed the 64-bit range.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, model_validator


def _to_fraction(value: Any) -> Any:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, dict) and {"num", "den"} <= value.keys():
        return Fraction(int(value["num"]), int(value["den"]))
    if isinstance(value, (int, str)):
        return Fraction(value)
    return value


def rational_json(value: Fraction) -> dict[str, str]:
    return {"num": str(value.numerator), "den": str(value.denominator)}


Rational = Annotated[
    Fraction,
    BeforeValidator(_to_fraction),
    PlainSerializer(rational_json, return_type=dict, when_used="json"),
]

BigInt = Annotated[int, PlainSerializer(str, return_type=str, when_used="json")]


class LabModel(BaseModel):
    """Immutable base for every domain value."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class RationalInterval(LabModel):
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Rational
    hi: Rational

    @model_validator(mode="after")
    def _ordered(self) -> "RationalInterval":
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def point(cls, value: Fraction | int) -> "RationalInterval":
        return cls(lo=value, hi=value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction | int) -> bool:
        return self.lo <= value <= self.hi

    def includes(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def clip_unit(self) -> "RationalInterval":
        """Intersect with [0, 1]; the caller guarantees a nonempty result."""
        return RationalInterval(lo=max(self.lo, Fraction(0)), hi=min(self.hi, Fraction(1)))

    def round_outward(self, bits: int) -> "RationalInterval":
        """Enclose in the smallest interval with endpoints in 2**-bits * Z."""
        if bits <= 0:
            return self
        scale = 1 << bits
        lo = Fraction((self.lo.numerator * scale) // self.lo.denominator, scale)
        hi = Fraction(-((-self.hi.numerator * scale) // self.hi.denominator), scale)
        return RationalInterval(lo=lo, hi=hi)

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)


def interval_row(interval: RationalInterval) -> dict[str, str]:
    """CSV row for an interval dump: lo_num, lo_den, hi_num, hi_den."""
    return {
        "lo_num": str(interval.lo.numerator),
        "lo_den": str(interval.lo.denominator),
        "hi_num": str(interval.hi.numerator),
        "hi_den": str(interval.hi.denominator),
    }
