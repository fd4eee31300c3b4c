from fractions import Fraction

import pytest
from pydantic import ValidationError

from maeda_lab.density.model import (
    GroupLabel,
    TowerSpec,
    build_maeda_tower,
    density_trace_rows,
    dim_cusp_level1,
    effective_lower_bound,
    target_group_label,
    tower_density,
)
from maeda_lab.errors import EmptyTowerError, PreconditionError


@pytest.mark.parametrize("k,dim", [(2, 0), (4, 0), (12, 1), (14, 0), (24, 2), (26, 1), (36, 3), (38, 2), (60, 5)])
def test_dim_cusp_level1(k, dim):
    assert dim_cusp_level1(k) == dim


def test_group_labels():
    assert target_group_label(2) is GroupLabel.PSL2
    assert target_group_label(3) is GroupLabel.PGL2
    with pytest.raises(PreconditionError):
        target_group_label(0)


def test_maeda_tower_records():
    tower = build_maeda_tower(2, 100)
    assert tower.degrees == (5, 6, 7, 8)
    assert tower.weights == (60, 72, 84, 96)


def test_explicit_weights():
    tower = build_maeda_tower(2, 100, weights=[60, 96])
    assert tower.degrees == (5, 8)
    with pytest.raises(PreconditionError):
        build_maeda_tower(2, 100, weights=[120])


def test_empty_tower():
    with pytest.raises(EmptyTowerError):
        build_maeda_tower(2, 20)


def test_tower_validation():
    with pytest.raises(ValidationError):
        TowerSpec(d=2, degrees=(4, 6))
    with pytest.raises(ValidationError):
        TowerSpec(d=2, degrees=(6, 6))
    with pytest.raises(ValidationError):
        TowerSpec(d=2, degrees=())


def test_two_step_tower_value():
    density = tower_density(TowerSpec(d=2, degrees=(5, 6)))
    assert density.a_terms == (Fraction(3, 8), Fraction(19, 48))
    assert density.point == (0, Fraction(3, 8), Fraction(239, 384))
    assert 1 - density.point[-1] == Fraction(5, 8) * Fraction(29, 48)


@pytest.mark.parametrize("bits", [0, 64, 256])
def test_guaranteed_contains_point(bits):
    density = tower_density(build_maeda_tower(3, 200), interval_bits=bits)
    for c, box in zip(density.point, density.guaranteed):
        assert box.contains(c)
        assert 0 <= box.lo <= box.hi <= 1
    assert all(x <= y for x, y in zip(density.point, density.point[1:]))


def test_rounding_only_widens():
    tower = build_maeda_tower(2, 150)
    exact = tower_density(tower, interval_bits=0)
    rounded = tower_density(tower, interval_bits=32)
    assert exact.point == rounded.point
    assert rounded.guaranteed[-1].includes(exact.guaranteed[-1])


def test_trace_rows():
    rows = density_trace_rows(tower_density(TowerSpec(d=2, degrees=(5, 6))))
    assert [row["N"] for row in rows] == ["5", "6"]
    assert float(rows[-1]["point_float"]) == pytest.approx(239 / 384)


def test_effective_bound_small():
    report = effective_lower_bound(2, 300)
    assert report.group_label is GroupLabel.PSL2
    assert report.lower_bound <= report.point_estimate
    assert report.guaranteed.contains(report.point_estimate)
    assert max(report.weights_used) <= 300


@pytest.mark.slow
def test_effective_bound_b3000():
    report = effective_lower_bound(2, 3000)
    assert report.lower_bound >= Fraction(9, 10)
    assert report.point_estimate >= Fraction(999, 1000)
    assert report.group_label is GroupLabel.PSL2
