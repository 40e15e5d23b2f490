#!/usr/bin/env python3
"""
Tests for the tail-control families
"""

import math

import numpy as np
import pytest

from heavy_tail_framework.core.base_dist import BaseDistribution
from heavy_tail_framework.exceptions import CapabilityError, DomainError, OverflowGuardError
from heavy_tail_framework.families import (
    ALL_FAMILIES,
    GRADIENT_FAMILIES,
    ExpM1OverX,
    GaussianTailPower,
    IndicatorPower,
    MatchedTail,
    Mirrored,
    PgmlDown,
    PgmlUp,
    Zero,
    family_from_dict,
)

XS = np.array([-3.0, -1.0, -0.25, 0.25, 1.0, 2.5])


def central_difference(fn, x, h=1e-6):
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


@pytest.mark.parametrize(
    "family",
    [
        PgmlUp(1.5, 4.0),
        PgmlDown(1.8, 4.0),
        ExpM1OverX(0.5),
        IndicatorPower(2.0, 8.0),
        GaussianTailPower(0.5, 4.0),
        Mirrored(ExpM1OverX(0.3)),
    ],
)
def test_derivative_matches_finite_differences(family):
    np.testing.assert_allclose(
        family.derivative(XS), central_difference(family.value, XS), rtol=1e-5, atol=1e-8
    )


@pytest.mark.parametrize("family", [PgmlUp(1.5), PgmlDown(1.8), ExpM1OverX(0.5)])
def test_closed_form_floor_bounds_grid(family):
    xs = np.linspace(-20.0, 20.0, 4001)
    xs = xs[xs != 0.0]
    combined = family.value(xs) + xs * family.derivative(xs)
    floor, _ = family.monotonicity_floor()
    assert np.min(combined) >= floor - 1e-12


def test_pgml_up_floor_location():
    family = PgmlUp(u=2.0, A=4.0)
    floor, argmin = family.monotonicity_floor()
    assert floor == pytest.approx(-math.exp(-2.0) / 4.0)
    assert argmin == pytest.approx(-2.0 / math.log(2.0))


def test_pgml_unit_base_is_constant():
    family = PgmlUp(u=1.0, A=4.0)
    np.testing.assert_allclose(family.value(XS), 0.25)
    assert not family.unbounded


@pytest.mark.parametrize("bad", [0.5, 0.999])
def test_pgml_rejects_base_below_one(bad):
    with pytest.raises(DomainError):
        PgmlUp(u=bad)
    with pytest.raises(DomainError):
        PgmlDown(v=bad)


def test_expm1_removable_singularity():
    family = ExpM1OverX(u=0.5)
    assert family.value(np.array([0.0]))[0] == pytest.approx(0.5)
    assert family.value(np.array([1e-9]))[0] == pytest.approx(0.5, rel=1e-8)
    assert family.derivative(np.array([0.0]))[0] == pytest.approx(0.125)


def test_expm1_zero_rate_is_identity():
    family = ExpM1OverX(u=0.0)
    np.testing.assert_array_equal(family.value(XS), 0.0)
    assert not family.unbounded


def test_indicator_power_vanishes_on_negative_axis():
    family = IndicatorPower(u=2.0, A=8.0)
    np.testing.assert_array_equal(family.value(np.array([-5.0, -0.1])), 0.0)
    assert family.value(np.array([2.0]))[0] == pytest.approx(0.5)


def test_indicator_power_accepts_unit_exponent():
    family = IndicatorPower(u=1.0, A=1.0)
    np.testing.assert_allclose(family.value(np.array([3.0])), [3.0])
    with pytest.raises(DomainError):
        IndicatorPower(u=0.5)


def test_gaussian_tail_power_zero_below_x0():
    family = GaussianTailPower(nu=0.5, A=4.0)
    assert family.x0 == 1.0
    np.testing.assert_array_equal(family.value(np.array([-2.0, 0.0, 1.0])), 0.0)
    assert family.value(np.array([3.0]))[0] > 0.0
    assert np.all(np.diff(family.value(np.linspace(1.0, 6.0, 200))) >= 0.0)


def test_gaussian_tail_power_has_no_gradient():
    with pytest.raises(CapabilityError):
        GaussianTailPower().param_gradient(XS)


def test_overflow_guard_reports_x():
    family = PgmlUp(u=2.0)
    with pytest.raises(OverflowGuardError) as info:
        family.check_range(np.array([1.0, 2000.0]))
    assert info.value.details["x"] == 2000.0


def test_mirrored_reflects_inner():
    inner = IndicatorPower(u=2.0, A=8.0)
    family = Mirrored(inner)
    assert family.side == "left"
    np.testing.assert_allclose(family.value(XS), inner.value(-XS))
    with pytest.raises(DomainError):
        Mirrored(PgmlDown())


def test_param_gradient_matches_finite_differences():
    family = PgmlUp(u=1.5, A=4.0)
    h = 1e-6
    numeric = (PgmlUp(1.5 + h).value(XS) - PgmlUp(1.5 - h).value(XS)) / (2 * h)
    np.testing.assert_allclose(family.param_gradient(XS)["u"], numeric, rtol=1e-6)


@pytest.mark.parametrize(
    "family",
    [PgmlUp(1.3, 2.0), PgmlDown(2.0), ExpM1OverX(0.7), IndicatorPower(1.5, 3.0), Zero(),
     GaussianTailPower(0.25, 2.0), Mirrored(IndicatorPower(2.0, 8.0))],
)
def test_family_dict_round_trip(family):
    assert family_from_dict(family.to_dict()) == family


def test_matched_tail_dict_round_trip():
    family = MatchedTail(
        base=BaseDistribution.gaussian(),
        target=BaseDistribution.student_t(3.0),
        mu=0.0,
        sigma=1.0,
        splice=1.0,
    )
    assert family_from_dict(family.to_dict()) == family


def test_unknown_family_name():
    with pytest.raises(DomainError):
        family_from_dict({"family": "spline", "params": {}})


def test_registry_lists_every_family():
    assert set(GRADIENT_FAMILIES) <= set(ALL_FAMILIES)
    for name, cls in ALL_FAMILIES.items():
        assert cls.name == name
