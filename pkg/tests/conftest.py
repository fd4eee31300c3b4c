"""Shared fixtures for the maeda_lab test suite."""

import pytest

from maeda_lab.arithmetic.ffpoly import IntPolynomial
from maeda_lab.config import settings


@pytest.fixture
def s5() -> IntPolynomial:
    return IntPolynomial(coeffs=(-1, -1, 0, 0, 0, 1))


@pytest.fixture
def s6() -> IntPolynomial:
    return IntPolynomial(coeffs=(-1, -1, 0, 0, 0, 0, 1))


@pytest.fixture
def pure_cubic() -> IntPolynomial:
    return IntPolynomial(coeffs=(-2, 0, 0, 1))


@pytest.fixture
def gaussian() -> IntPolynomial:
    return IntPolynomial(coeffs=(1, 0, 1))


@pytest.fixture
def cyclotomic8() -> IntPolynomial:
    return IntPolynomial(coeffs=(1, 0, 0, 0, 1))


@pytest.fixture
def small_segments(monkeypatch):
    """Force many sieve segments so parallel merges are exercised."""
    monkeypatch.setattr(settings, "segment_size", 1024)
    return settings
