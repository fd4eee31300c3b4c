import pytest

from maeda_lab.catalog.loader import load_catalog, resolve_polynomial
from maeda_lab.errors import PolynomialParseError


def test_catalog_entries_are_monic():
    catalog = load_catalog()
    assert {"s5", "pure-cubic", "gaussian", "cyclotomic-8"} <= set(catalog)
    for entry in catalog.values():
        assert resolve_polynomial(entry["name"]).is_monic


def test_resolve_name_or_text():
    assert resolve_polynomial("s5").to_text() == "x^5 - x - 1"
    assert resolve_polynomial("x^3-2") == resolve_polynomial("pure-cubic")
    with pytest.raises(PolynomialParseError):
        resolve_polynomial("no-such-polynomial")
