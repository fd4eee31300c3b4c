"""Empirical Chebotarev experiments driven by mod-p factorization patterns.

For a monic irreducible f and an unramified prime p, the factor degrees of
f mod p are the residue degrees of the primes above p (Dedekind) and the
cycle type of Frobenius on the roots. Counting them over all p up to a limit
estimates the proportion of the Galois group with each cycle type.

Scans run over a segmented sieve; segments may be farmed out to a process
pool and are always merged in ascending segment order, so every tally is
independent of the worker count.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from enum import Enum
from fractions import Fraction

from pydantic import Field, model_validator

from ..combinatorics.sequences import a_value
from ..config import settings
from ..density.model import TowerSpec, tower_density
from ..errors import DegreeOutOfRangeError, InvalidCycleLengthError, PreconditionError
from ..schemas import LabModel, Rational, RationalInterval
from .ffpoly import IntPolynomial, Profile, profile_counts
from .primes import base_primes_for, check_prime_limit, primes_in_segment, segment_plan

logger = logging.getLogger(__name__)

MIN_PRIME_LIMIT = 100


class Verdict(str, Enum):
    CERTIFIED_SN = "certified_Sn"
    INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class ResidueDegreeProfile(LabModel):
    """Factor degrees of f mod p as (degree, multiplicity), largest first."""

    p: int
    degrees: tuple[tuple[int, int], ...] = ()
    ramified: bool = False

    @model_validator(mode="after")
    def _shape(self) -> "ResidueDegreeProfile":
        if self.ramified and self.degrees:
            raise ValueError("ramified profiles carry no degrees")
        if any(deg < 1 or mult < 1 for deg, mult in self.degrees):
            raise ValueError("degrees and multiplicities must be positive")
        return self

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(deg for deg, mult in self.degrees for _ in range(mult))

    @property
    def label(self) -> str:
        return profile_label(self.degrees) if not self.ramified else "ramified"

    def contains(self, d: int) -> bool:
        return any(deg == d for deg, _ in self.degrees)


class ScanRow(LabModel):
    p: int
    ramified: bool
    profile: str
    hit: bool

    def as_row(self) -> dict[str, str]:
        return {
            "p": str(self.p),
            "ramified": str(int(self.ramified)),
            "profile": self.profile,
            "hit": str(int(self.hit)),
        }


class DensityExperiment(LabModel):
    poly: IntPolynomial
    d: int
    prime_limit: int
    unramified_count: int
    hit_count: int
    ramified_skipped: int
    estimate: Rational
    predicted: Rational | None = None
    certificate_verdict: Verdict | None = None
    rows: tuple[ScanRow, ...] = Field(default=(), exclude=True)

    @model_validator(mode="after")
    def _counts(self) -> "DensityExperiment":
        if not 0 <= self.hit_count <= self.unramified_count:
            raise ValueError("hit_count must lie in [0, unramified_count]")
        if self.estimate != Fraction(self.hit_count, self.unramified_count):
            raise ValueError("estimate must equal hit_count / unramified_count")
        return self

    def summary(self) -> dict:
        """Flat summary with the prediction split into decimal strings."""
        return {
            "poly": self.poly.to_text(),
            "d": self.d,
            "prime_limit": self.prime_limit,
            "unramified_count": self.unramified_count,
            "hit_count": self.hit_count,
            "ramified_skipped": self.ramified_skipped,
            "estimate": {"num": str(self.estimate.numerator), "den": str(self.estimate.denominator)},
            "estimate_float": float(self.estimate),
            "predicted_num": None if self.predicted is None else str(self.predicted.numerator),
            "predicted_den": None if self.predicted is None else str(self.predicted.denominator),
            "certificate_verdict": None if self.certificate_verdict is None else self.certificate_verdict.value,
        }


WITNESS_KEYS = ("transitive", "n_minus_1_cycle", "transposition")


def required_witnesses(n: int) -> tuple[str, ...]:
    if n <= 1:
        return ()
    if n == 2:
        return ("transposition",)
    return WITNESS_KEYS


class GaloisCertificate(LabModel):
    poly: IntPolynomial
    n: int
    observed_patterns: tuple[str, ...]
    verdict: Verdict
    witnesses: dict[str, int]
    primes_scanned: int = 0

    @model_validator(mode="after")
    def _witnessed(self) -> "GaloisCertificate":
        if self.verdict is Verdict.CERTIFIED_SN and any(k not in self.witnesses for k in required_witnesses(self.n)):
            raise ValueError("certified_Sn requires every witness")
        return self

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_SN


class ProfileTable(LabModel):
    """Counts and frequencies of factorization patterns over unramified primes."""

    poly: IntPolynomial
    prime_limit: int
    total: int
    counts: dict[str, int]
    frequencies: dict[str, Rational]

    @model_validator(mode="after")
    def _sums(self) -> "ProfileTable":
        if sum(self.counts.values()) != self.total or (self.total and sum(self.frequencies.values()) != 1):
            raise ValueError("frequencies must partition the counted primes")
        return self

    def by_partition(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(int(x) for x in label.split("-")): freq for label, freq in self.frequencies.items()}


class CompositeExperiment(LabModel):
    """Proportion of primes where at least one polynomial has a degree-d factor."""

    polys: tuple[IntPolynomial, ...]
    d: int
    prime_limit: int
    counted: int
    hit_count: int
    ramified_skipped: int
    estimate: Rational
    verdicts: tuple[Verdict, ...]
    predicted: Rational | None = None
    guaranteed: RationalInterval | None = None

    @model_validator(mode="after")
    def _counts(self) -> "CompositeExperiment":
        if not 0 <= self.hit_count <= self.counted:
            raise ValueError("hit_count must lie in [0, counted]")
        return self


# ---------------------------------------------------------------------------
# Prime iteration
# ---------------------------------------------------------------------------

def profile_label(degrees: Profile) -> str:
    """"2-1-1-1" style label of a (degree, multiplicity) profile."""
    return "-".join(str(deg) for deg, mult in degrees for _ in range(mult))


def _segment_profiles(
    idx: int, polys: Sequence[tuple[int, ...]], low: int, high: int, base
) -> tuple[int, list[tuple[int, tuple[Profile | None, ...]]]]:
    out = []
    for p in primes_in_segment(low, high, base).tolist():
        out.append((p, tuple(profile_counts(c, p) for c in polys)))
    return idx, out


def iter_profiles(
    polys: Sequence[IntPolynomial], prime_limit: int, workers: int | None = None
) -> Iterator[tuple[int, tuple[Profile | None, ...]]]:
    """Yield (p, profiles) for every prime p <= prime_limit in increasing order.

    A profile of None marks a prime where the reduction is not squarefree.
    """
    workers = workers or settings.workers
    coeffs = [tuple(f.coeffs) for f in polys]
    plan = segment_plan(prime_limit)
    base = base_primes_for(prime_limit)
    if workers <= 1 or len(plan) == 1:
        for idx, low, high in plan:
            yield from _segment_profiles(idx, coeffs, low, high, base)[1]
        return
    by_idx = {}
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(_segment_profiles, idx, coeffs, low, high, base) for idx, low, high in plan]
        for fut in as_completed(futures):
            idx, rows = fut.result()
            by_idx[idx] = rows
            logger.debug("Segment %d done: %d primes", idx, len(rows))
    for idx, _, _ in plan:
        yield from by_idx[idx]


def _require_monic(f: IntPolynomial) -> None:
    if not f.is_monic:
        raise PreconditionError(f"polynomial {f} must be monic")


def _check_scan(f: IntPolynomial, d: int, prime_limit: int) -> None:
    _require_monic(f)
    if d < 1:
        raise InvalidCycleLengthError(f"target degree must be >= 1, got {d}")
    if f.degree < d:
        raise DegreeOutOfRangeError(f"deg f = {f.degree} is smaller than d = {d}")
    if prime_limit < MIN_PRIME_LIMIT:
        raise PreconditionError(f"prime_limit must be >= {MIN_PRIME_LIMIT}, got {prime_limit}")
    check_prime_limit(prime_limit)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def residue_degrees(f: IntPolynomial, p: int) -> ResidueDegreeProfile:
    _require_monic(f)
    counts = profile_counts(tuple(f.coeffs), p)
    if counts is None:
        return ResidueDegreeProfile(p=p, ramified=True)
    if sum(deg * mult for deg, mult in counts) != f.degree:
        raise PreconditionError(f"profile of {f} mod {p} does not account for every root")
    return ResidueDegreeProfile(p=p, degrees=counts)


def certify_symmetric_group(f: IntPolynomial, prime_budget: int | None = None) -> GaloisCertificate:
    """Look for witnesses that Gal(f) = S_n among the primes p <= prime_budget.

    An irreducible reduction gives transitivity, an (n-1)-cycle then gives
    2-transitivity, and a pattern with a single 2 and otherwise odd degrees
    has an odd power that is a transposition; together they force S_n.
    """
    _require_monic(f)
    n = f.degree
    if n < 1:
        raise DegreeOutOfRangeError("cannot certify a constant polynomial")
    budget = settings.certify_budget if prime_budget is None else prime_budget
    needed = required_witnesses(n)
    witnesses: dict[str, int] = {}
    observed: set[str] = set()
    scanned = 0
    if needed and budget >= 2:
        for p, (profile,) in iter_profiles([f], budget, workers=1):
            scanned += 1
            if profile is None:
                continue
            observed.add(profile_label(profile))
            if profile == ((n, 1),):
                witnesses.setdefault("transitive", p)
            if n >= 3 and profile == ((n - 1, 1), (1, 1)):
                witnesses.setdefault("n_minus_1_cycle", p)
            if dict(profile).get(2) == 1 and all(deg % 2 for deg, _ in profile if deg != 2):
                witnesses.setdefault("transposition", p)
            if all(k in witnesses for k in needed):
                break
    certified = all(k in witnesses for k in needed)
    verdict = Verdict.CERTIFIED_SN if certified else Verdict.INCONCLUSIVE
    if certified:
        logger.info("Certified S_%d for %s after %d primes: %s", n, f, scanned, witnesses)
    else:
        logger.warning("S_%d certificate for %s inconclusive after %d primes", n, f, scanned)
    return GaloisCertificate(
        poly=f,
        n=n,
        observed_patterns=tuple(sorted(observed)),
        verdict=verdict,
        witnesses={k: witnesses[k] for k in WITNESS_KEYS if k in witnesses},
        primes_scanned=scanned,
    )


def chebotarev_scan(
    f: IntPolynomial,
    d: int,
    prime_limit: int,
    workers: int | None = None,
    record: bool = False,
    certify_budget: int | None = None,
) -> DensityExperiment:
    """Proportion of unramified p <= prime_limit with a degree-d prime above p.

    When f is certified S_n the prediction is a(floor(n / d)).
    """
    _check_scan(f, d, prime_limit)
    unramified = hits = ramified = 0
    seen_irreducible = False
    rows = []
    for p, (profile,) in iter_profiles([f], prime_limit, workers):
        if profile is None:
            ramified += 1
            if record:
                rows.append(ScanRow(p=p, ramified=True, profile="", hit=False))
            continue
        unramified += 1
        hit = any(deg == d for deg, _ in profile)
        hits += hit
        seen_irreducible = seen_irreducible or profile == ((f.degree, 1),)
        if record:
            rows.append(ScanRow(p=p, ramified=False, profile=profile_label(profile), hit=hit))
    if not unramified:
        raise PreconditionError(f"no unramified primes up to {prime_limit}")
    if not seen_irreducible:
        logger.warning("No irreducible reduction of %s up to %d; f may be reducible", f, prime_limit)

    certificate = certify_symmetric_group(f, certify_budget)
    predicted = a_value(d, f.degree // d) if certificate.certified else None
    logger.info("Scan %s d=%d up to %d: %d/%d hits", f, d, prime_limit, hits, unramified)
    return DensityExperiment(
        poly=f,
        d=d,
        prime_limit=prime_limit,
        unramified_count=unramified,
        hit_count=hits,
        ramified_skipped=ramified,
        estimate=Fraction(hits, unramified),
        predicted=predicted,
        certificate_verdict=certificate.verdict,
        rows=tuple(rows),
    )


def profile_density_table(f: IntPolynomial, prime_limit: int, workers: int | None = None) -> ProfileTable:
    _require_monic(f)
    if prime_limit < MIN_PRIME_LIMIT:
        raise PreconditionError(f"prime_limit must be >= {MIN_PRIME_LIMIT}, got {prime_limit}")
    check_prime_limit(prime_limit)
    counts: Counter = Counter()
    for _, (profile,) in iter_profiles([f], prime_limit, workers):
        if profile is not None:
            counts[profile_label(profile)] += 1
    total = sum(counts.values())
    if not total:
        raise PreconditionError(f"no unramified primes up to {prime_limit}")
    ordered = dict(sorted(counts.items()))
    return ProfileTable(
        poly=f,
        prime_limit=prime_limit,
        total=total,
        counts=ordered,
        frequencies={label: Fraction(c, total) for label, c in ordered.items()},
    )


def composite_scan(
    polys: Sequence[IntPolynomial],
    d: int,
    prime_limit: int,
    workers: int | None = None,
    certify_budget: int | None = None,
) -> CompositeExperiment:
    """Joint scan of several polynomials at once.

    A prime is counted when every reduction is squarefree, and it is a hit
    when at least one polynomial has a degree-d factor. If every polynomial
    is certified S_n and the degrees form a valid tower, the tower recursion
    supplies the point prediction and its guaranteed interval.
    """
    if not polys:
        raise PreconditionError("composite scan needs at least one polynomial")
    for f in polys:
        _check_scan(f, d, prime_limit)
    counted = hits = ramified = 0
    for _, profiles in iter_profiles(polys, prime_limit, workers):
        if any(profile is None for profile in profiles):
            ramified += 1
            continue
        counted += 1
        hits += any(deg == d for profile in profiles for deg, _ in profile)
    if not counted:
        raise PreconditionError(f"no jointly unramified primes up to {prime_limit}")

    verdicts = tuple(certify_symmetric_group(f, certify_budget).verdict for f in polys)
    predicted = guaranteed = None
    degrees = [f.degree for f in polys]
    tower_ok = all(x < y for x, y in zip(degrees, degrees[1:])) and min(degrees) >= max(5, 2 * d)
    if tower_ok and all(v is Verdict.CERTIFIED_SN for v in verdicts):
        density = tower_density(TowerSpec(d=d, degrees=degrees))
        predicted, guaranteed = density.point[-1], density.guaranteed[-1]
    else:
        logger.debug("No tower prediction for degrees %s with verdicts %s", degrees, verdicts)
    logger.info("Composite scan d=%d up to %d: %d/%d hits", d, prime_limit, hits, counted)
    return CompositeExperiment(
        polys=tuple(polys),
        d=d,
        prime_limit=prime_limit,
        counted=counted,
        hit_count=hits,
        ramified_skipped=ramified,
        estimate=Fraction(hits, counted),
        verdicts=verdicts,
        predicted=predicted,
        guaranteed=guaranteed,
    )
