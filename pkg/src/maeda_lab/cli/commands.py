"""Subcommand handlers. Each takes the parsed arguments and returns a CommandResult."""

from __future__ import annotations

import argparse
import logging

from ..arithmetic.chebotarev import chebotarev_scan, composite_scan, profile_density_table
from ..catalog.loader import resolve_polynomial
from ..combinatorics.permcycles import (
    census_bruteforce,
    census_json,
    class_proportions,
    count_at_least_one,
    count_exactly_j,
    count_special_b1,
    count_special_b2,
    monte_carlo_census,
    relative_discrepancy_bound,
    signed_discrepancy_bound,
)
from ..combinatorics.sequences import a_closed, a_recursive, limit_enclosure, limit_float, sequence_rows
from ..config import settings
from ..density.model import TowerSpec, density_trace_rows, effective_lower_bound, tower_density
from ..errors import (
    DegreeOutOfRangeError,
    InvalidCycleLengthError,
    NonpositiveDenominatorError,
    PreconditionError,
)
from ..modular.hecke import maeda_sweep, parse_weight_range
from ..schemas import rational_json
from .output import CommandResult

logger = logging.getLogger(__name__)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise PreconditionError(f"expected a comma-separated integer list, got {text!r}") from exc


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

def census(args: argparse.Namespace) -> CommandResult:
    n, d = args.n, args.d
    if args.brute:
        if not 1 <= n <= settings.census_cap:
            raise DegreeOutOfRangeError(f"enumeration needs 1 <= n <= {settings.census_cap}, got {n}")
        if not 1 <= d <= n:
            raise InvalidCycleLengthError(f"cycle length must satisfy 1 <= d <= n, got d={d}, n={n}")
    if args.samples < 0:
        raise PreconditionError(f"--samples must be >= 0, got {args.samples}")
    formula = None
    if n >= 2 * d or not args.brute:
        try:
            relative = rational_json(relative_discrepancy_bound(n, d, args.enclosure_terms))
        except NonpositiveDenominatorError as exc:
            logger.warning("Relative discrepancy bound unavailable: %s", exc)
            relative = None
        formula = {
            "at_least_one": str(count_at_least_one(n, d)),
            "exactly_j": [str(count_exactly_j(n, d, j)) for j in range(1, n // d + 1)],
            "special_b1": str(count_special_b1(n, d)),
            "special_b2": str(count_special_b2(n, d)),
            "signed_discrepancy_bound": rational_json(signed_discrepancy_bound(n, d)),
            "relative_discrepancy_bound": relative,
        }
    payload: dict = {"n": n, "d": d, "formula": formula, "bruteforce": None, "monte_carlo": None}

    rows = []
    if formula is not None:
        rows.append({"quantity": "at_least_one", "formula": formula["at_least_one"]})
        rows += [{"quantity": f"exactly_{j}", "formula": c} for j, c in enumerate(formula["exactly_j"], 1)]
        rows.append({"quantity": "special_b1", "formula": formula["special_b1"]})
        rows.append({"quantity": "special_b2", "formula": formula["special_b2"]})

    if args.brute:
        exact = census_json(census_bruteforce(n, d, args.workers))
        payload["bruteforce"] = exact
        if formula is not None:
            payload["agree"] = all(
                exact[key] == formula[key] for key in ("at_least_one", "exactly_j", "special_b1", "special_b2")
            )
            for row in rows:
                key = row["quantity"]
                if key.startswith("exactly_"):
                    row["bruteforce"] = exact["exactly_j"][int(key.split("_")[1]) - 1]
                else:
                    row["bruteforce"] = exact[key]
        else:
            rows = [{"quantity": key, "bruteforce": exact[key]} for key in ("at_least_one", "plus", "minus")]

    guaranteed = True
    if args.samples:
        sampled = monte_carlo_census(n, d, args.samples, args.seed)
        payload["monte_carlo"] = sampled.model_dump(mode="json")
        guaranteed = False
    return CommandResult(command="census", payload=payload, rows=rows, guaranteed=guaranteed)


# ---------------------------------------------------------------------------
# seq
# ---------------------------------------------------------------------------

def seq(args: argparse.Namespace) -> CommandResult:
    sequence = a_recursive(args.d, args.imax)
    terms = args.enclosure_terms or settings.enclosure_terms
    payload = {
        "d": args.d,
        "i_max": args.imax,
        "a": [rational_json(x) for x in sequence.a],
        "limit": limit_enclosure(args.d, terms).model_dump(mode="json"),
        "limit_float": limit_float(args.d),
    }
    if args.closed:
        payload["closed_agrees"] = all(a_closed(args.d, i) == x for i, x in enumerate(sequence.a))
    return CommandResult(command="seq", payload=payload, rows=sequence_rows(sequence))


# ---------------------------------------------------------------------------
# density, effective
# ---------------------------------------------------------------------------

def density(args: argparse.Namespace) -> CommandResult:
    tower = TowerSpec(d=args.d, degrees=_int_list(args.degrees))
    trace = tower_density(tower, args.enclosure_terms)
    rows = density_trace_rows(trace)
    if not args.guaranteed:
        rows = [{k: v for k, v in row.items() if k not in ("lo_float", "hi_float")} for row in rows]
    payload = trace.model_dump(mode="json")
    payload["final_float"] = float(trace.point[-1])
    return CommandResult(command="density", payload=payload, rows=rows)


def effective(args: argparse.Namespace) -> CommandResult:
    weights = _int_list(args.weights) if args.weights else None
    report = effective_lower_bound(args.d, args.B, args.enclosure_terms, weights)
    payload = report.model_dump(mode="json")
    payload["lower_bound_float"] = float(report.lower_bound)
    payload["point_estimate_float"] = float(report.point_estimate)
    rows = [
        {
            "d": str(report.d),
            "B": str(report.B),
            "fields": str(len(report.tower.degrees)),
            "lower_bound_float": repr(float(report.lower_bound)),
            "point_estimate_float": repr(float(report.point_estimate)),
            "group_label": report.group_label.value,
        }
    ]
    return CommandResult(command="effective", payload=payload, rows=rows)


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------

def scan(args: argparse.Namespace) -> CommandResult:
    poly = resolve_polynomial(args.poly)
    experiment = chebotarev_scan(
        poly, args.d, args.plimit, args.workers, record=args.format == "csv", certify_budget=args.budget
    )
    rows = [row.as_row() for row in experiment.rows]
    return CommandResult(
        command="scan",
        payload=experiment.summary(),
        rows=rows,
        conclusive=experiment.predicted is not None,
    )


def classes(args: argparse.Namespace) -> CommandResult:
    poly = resolve_polynomial(args.poly)
    table = profile_density_table(poly, args.plimit, args.workers)
    predicted = {}
    if poly.degree <= settings.census_cap:
        predicted = {"-".join(map(str, k)): v for k, v in class_proportions(poly.degree).items()}
    payload = table.model_dump(mode="json")
    payload["poly"] = poly.to_text()
    payload["predicted_sn"] = {label: rational_json(v) for label, v in predicted.items()}
    rows = [
        {
            "profile": label,
            "count": str(count),
            "frequency_float": repr(float(table.frequencies[label])),
            "predicted_sn_float": repr(float(predicted[label])) if label in predicted else "",
        }
        for label, count in table.counts.items()
    ]
    return CommandResult(command="classes", payload=payload, rows=rows)


def tower_scan(args: argparse.Namespace) -> CommandResult:
    polys = [resolve_polynomial(text) for text in args.polys.split(";") if text.strip()]
    experiment = composite_scan(polys, args.d, args.plimit, args.workers, certify_budget=args.budget)
    payload = experiment.model_dump(mode="json")
    payload["polys"] = [f.to_text() for f in polys]
    payload["estimate_float"] = float(experiment.estimate)
    row = {
        "d": str(experiment.d),
        "prime_limit": str(experiment.prime_limit),
        "counted": str(experiment.counted),
        "hit_count": str(experiment.hit_count),
        "estimate_float": repr(float(experiment.estimate)),
        "predicted_float": "" if experiment.predicted is None else repr(float(experiment.predicted)),
    }
    return CommandResult(
        command="tower-scan", payload=payload, rows=[row], conclusive=experiment.predicted is not None
    )


# ---------------------------------------------------------------------------
# maeda
# ---------------------------------------------------------------------------

def maeda(args: argparse.Namespace) -> CommandResult:
    weights = parse_weight_range(args.weights)
    if not weights:
        raise PreconditionError(f"no weight in {args.weights!r} has a nonzero cusp space")
    evidence = maeda_sweep(weights, args.budget, args.workers)
    rows = [
        {
            "k": str(e.k),
            "dk": str(e.dk),
            "irreducible_witness": "" if e.irreducible_witness is None else str(e.irreducible_witness),
            "transposition_witness": str(e.symmetric_group.witnesses.get("transposition", "")),
            "verdict": e.verdict.value,
        }
        for e in evidence
    ]
    return CommandResult(
        command="maeda",
        payload={"weights": weights, "evidence": [e.model_dump(mode="json") for e in evidence]},
        rows=rows,
        conclusive=all(e.verdict.value == "consistent" for e in evidence),
    )


HANDLERS = {
    "census": census,
    "seq": seq,
    "density": density,
    "effective": effective,
    "scan": scan,
    "classes": classes,
    "maeda": maeda,
    "tower-scan": tower_scan,
}
