"""Density of primes with a residue-degree-d prime in a tower of S_N-fields.

For a tower of fields with Galois groups S_{N_1}, S_{N_2}, ... (N strictly
increasing) the proportion c_n of the composite's Galois group whose
projection to some S_{N_i} contains a d-cycle obeys

    c_n = c_{n-1} + a_n - (1 + delta_n) a_n c_{n-1},   a_n = a(floor(N_n / d)),

with |delta_n| bounded but of unknown sign. ``tower_density`` carries the
delta = 0 value exactly and a guaranteed interval that absorbs every
admissible delta. Maeda's conjecture supplies such towers from level-1
cusp form coefficient fields of degree d_k = dim S_k(1).
"""

from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from collections.abc import Sequence

from pydantic import Field, model_validator

from ..combinatorics.sequences import a_value, delta_bound, include_exclude_step
from ..config import settings
from ..errors import EmptyTowerError, ExactnessError, PreconditionError
from ..schemas import LabModel, Rational, RationalInterval

logger = logging.getLogger(__name__)


class GroupLabel(str, Enum):
    PSL2 = "PSL2"
    PGL2 = "PGL2"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class TowerSpec(LabModel):
    """Target degree d and the strictly increasing degrees N_1 < N_2 < ..."""

    d: int = Field(ge=1)
    degrees: tuple[int, ...]
    # weights k with d_k = N, when the tower comes from cusp forms
    weights: tuple[int, ...] | None = None

    @model_validator(mode="after")
    def _valid(self) -> "TowerSpec":
        if not self.degrees:
            raise ValueError("a tower needs at least one degree")
        floor = max(5, 2 * self.d)
        if any(n < floor for n in self.degrees):
            raise ValueError(f"every degree must be >= max(5, 2d) = {floor}")
        if any(x >= y for x, y in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be strictly increasing")
        if self.weights is not None and len(self.weights) != len(self.degrees):
            raise ValueError("weights and degrees must have the same length")
        return self


class TowerDensity(LabModel):
    """point[n] and guaranteed[n] describe c_n; index 0 is c_0 = 0.

    a_terms[n - 1] and delta_bounds[n - 1] are the inputs of step n.
    """

    tower: TowerSpec
    point: tuple[Rational, ...]
    guaranteed: tuple[RationalInterval, ...]
    a_terms: tuple[Rational, ...]
    delta_bounds: tuple[Rational, ...]

    @model_validator(mode="after")
    def _invariants(self) -> "TowerDensity":
        if not len(self.point) == len(self.guaranteed) == len(self.a_terms) + 1:
            raise ValueError("one point and one interval per step, plus c_0")
        for c, box in zip(self.point, self.guaranteed):
            if not box.contains(c) or box.lo < 0 or box.hi > 1:
                raise ValueError("point must lie in its guaranteed interval within [0, 1]")
        if any(x > y for x, y in zip(self.point, self.point[1:])):
            raise ValueError("point sequence must be non-decreasing")
        return self


class EffectiveBoundReport(LabModel):
    d: int
    B: int
    weights_used: tuple[int, ...]
    tower: TowerSpec
    lower_bound: Rational
    point_estimate: Rational
    guaranteed: RationalInterval
    group_label: GroupLabel

    @model_validator(mode="after")
    def _ordered(self) -> "EffectiveBoundReport":
        if any(k > self.B for k in self.weights_used):
            raise ValueError("weights must not exceed B")
        if self.lower_bound > self.point_estimate:
            raise ValueError("lower bound must not exceed the point estimate")
        return self


# ---------------------------------------------------------------------------
# Dimensions and towers
# ---------------------------------------------------------------------------

def dim_cusp_level1(k: int) -> int:
    """dim S_k(1) by the valence formula."""
    if k < 0:
        raise PreconditionError(f"weight must be >= 0, got {k}")
    if k % 2 or k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def target_group_label(d: int) -> GroupLabel:
    """PSL2 for even residue degree, PGL2 for odd."""
    if d < 1:
        raise PreconditionError(f"degree must be >= 1, got {d}")
    return GroupLabel.PSL2 if d % 2 == 0 else GroupLabel.PGL2


def build_maeda_tower(d: int, B: int, weights: Sequence[int] | None = None) -> TowerSpec:
    """Tower of cusp-form coefficient-field degrees for weights k <= B.

    By default keeps the record subsequence: even k in increasing order whose
    d_k exceeds every degree kept so far and is at least max(5, 2d).
    """
    if d < 1:
        raise PreconditionError(f"degree must be >= 1, got {d}")
    floor = max(5, 2 * d)
    if weights is not None:
        if any(k > B or k % 2 for k in weights):
            raise PreconditionError("explicit weights must be even and <= B")
        kept = list(weights)
        degrees = [dim_cusp_level1(k) for k in kept]
    else:
        kept, degrees = [], []
        for k in range(4, B + 1, 2):
            dk = dim_cusp_level1(k)
            if dk >= floor and (not degrees or dk > degrees[-1]):
                kept.append(k)
                degrees.append(dk)
    if not degrees:
        raise EmptyTowerError(f"no even weight k <= {B} has d_k >= {floor}")
    logger.info("Tower for d=%d, B=%d: %d fields, degrees %d..%d", d, B, len(degrees), degrees[0], degrees[-1])
    return TowerSpec(d=d, degrees=degrees, weights=kept)


# ---------------------------------------------------------------------------
# Recursion
# ---------------------------------------------------------------------------

def tower_density(
    tower: TowerSpec, enclosure_terms: int | None = None, interval_bits: int | None = None
) -> TowerDensity:
    """Run the recursion from c_0 = 0 with delta = 0 (point) and with the
    worst-case delta at every step (guaranteed)."""
    bits = settings.interval_bits if interval_bits is None else interval_bits
    d = tower.d
    residual = Fraction(1)
    point = [Fraction(0)]
    guaranteed = [RationalInterval.point(0)]
    a_terms, bounds = [], []
    for n in tower.degrees:
        a = a_value(d, n // d)
        bound = delta_bound(d, n, enclosure_terms)
        prev = guaranteed[-1]
        step = include_exclude_step(prev, a, bound)
        if step.width > prev.width + 2 * a * bound * prev.hi:
            raise ExactnessError(f"interval width escaped its envelope at N={n}")
        # 1 - c_n = prod (1 - a_i) when delta = 0
        residual *= 1 - a
        c = 1 - residual
        step = step.round_outward(bits)
        if not step.contains(c):
            raise ExactnessError(f"delta = 0 value left the guaranteed interval at N={n}")
        point.append(c)
        guaranteed.append(step)
        a_terms.append(a)
        bounds.append(bound)
    return TowerDensity(tower=tower, point=point, guaranteed=guaranteed, a_terms=a_terms, delta_bounds=bounds)


def effective_lower_bound(
    d: int,
    B: int,
    enclosure_terms: int | None = None,
    weights: Sequence[int] | None = None,
) -> EffectiveBoundReport:
    """Guaranteed lower bound for the density of primes with a degree-d prime
    in some coefficient field of weight <= B, assuming Maeda up to B."""
    tower = build_maeda_tower(d, B, weights)
    density = tower_density(tower, enclosure_terms)
    final = density.guaranteed[-1]
    logger.info("Effective bound d=%d B=%d: lower %.6f, point %.6f", d, B, float(final.lo), float(density.point[-1]))
    return EffectiveBoundReport(
        d=d,
        B=B,
        weights_used=tower.weights or (),
        tower=tower,
        lower_bound=final.lo,
        point_estimate=density.point[-1],
        guaranteed=final,
        group_label=target_group_label(d),
    )


def density_trace_rows(density: TowerDensity) -> list[dict[str, str]]:
    """Float rows step, N, a, point, lo, hi for CSV output."""
    rows = []
    for step, n in enumerate(density.tower.degrees, start=1):
        lo, hi = density.guaranteed[step].as_floats()
        rows.append(
            {
                "step": str(step),
                "N": str(n),
                "a_float": repr(float(density.a_terms[step - 1])),
                "point_float": repr(float(density.point[step])),
                "lo_float": repr(lo),
                "hi_float": repr(hi),
            }
        )
    return rows
