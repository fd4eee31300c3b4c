"""Named polynomials shipped with the package."""

import json
from functools import lru_cache
from pathlib import Path

from ..arithmetic.ffpoly import IntPolynomial, parse_polynomial

CATALOG_PATH = Path(__file__).parent / "polynomials.json"


@lru_cache(maxsize=1)
def load_catalog() -> dict[str, dict]:
    with open(CATALOG_PATH, "r", encoding="utf-8") as f:
        entries = json.load(f)["polynomials"]
    return {entry["name"]: entry for entry in entries}


def resolve_polynomial(text: str) -> IntPolynomial:
    """A catalog name such as ``s5``, or anything ``parse_polynomial`` accepts."""
    entry = load_catalog().get(text.strip())
    if entry is not None:
        return IntPolynomial(coeffs=tuple(entry["coeffs"]))
    return parse_polynomial(text)
