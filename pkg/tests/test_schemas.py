from fractions import Fraction

import pytest
from pydantic import ValidationError

from maeda_lab.schemas import RationalInterval, interval_row


def test_interval_serializes_as_decimal_strings():
    box = RationalInterval(lo=Fraction(1, 3), hi=Fraction(1, 2))
    assert box.model_dump(mode="json") == {"lo": {"num": "1", "den": "3"}, "hi": {"num": "1", "den": "2"}}


def test_interval_accepts_json_and_strings():
    box = RationalInterval.model_validate({"lo": {"num": "1", "den": "3"}, "hi": "1/2"})
    assert box.lo == Fraction(1, 3)
    assert box.hi == Fraction(1, 2)


def test_empty_interval_rejected():
    with pytest.raises(ValidationError):
        RationalInterval(lo=Fraction(1, 2), hi=Fraction(1, 3))


def test_round_outward_encloses():
    box = RationalInterval.point(Fraction(1, 3)).round_outward(4)
    assert box.lo == Fraction(5, 16)
    assert box.hi == Fraction(3, 8)
    assert box.contains(Fraction(1, 3))


def test_round_outward_keeps_dyadic_points_and_zero_bits():
    box = RationalInterval(lo=Fraction(1, 4), hi=Fraction(3, 4))
    assert box.round_outward(8) == box
    odd = RationalInterval.point(Fraction(1, 7))
    assert odd.round_outward(0) == odd


def test_clip_unit_and_rows():
    box = RationalInterval(lo=Fraction(-1, 2), hi=Fraction(3, 2)).clip_unit()
    assert (box.lo, box.hi) == (0, 1)
    assert interval_row(box) == {"lo_num": "0", "lo_den": "1", "hi_num": "1", "hi_den": "1"}
