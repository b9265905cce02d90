import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covgame import DensitySpec, GainMode, SbsConfig, Scenario, channel_gain, distance_to_plane, sinr
from covgame.errors import InvalidArgumentError
from covgame.geometry import check_profile


def test_distance_is_three_dimensional():
    s = SbsConfig(1, (1.0, 2.0, 0.5), 1.0)
    assert distance_to_plane(s, 1.0, 2.0) == 0.5
    assert distance_to_plane(s, 4.0, 6.0) == pytest.approx(math.sqrt(25.25))


def test_distance_uses_second_coordinate_for_y():
    s = SbsConfig(1, (0.0, 3.0, 0.1), 1.0)
    assert distance_to_plane(s, 0.0, 3.0) == pytest.approx(0.1)


@pytest.mark.parametrize("mode,expected", [
    (GainMode.PAPER_COMPOUND, 2.0 * 0.5 ** -6),
    (GainMode.STANDARD_PATHLOSS, 2.0 * 0.5 ** -3),
    (GainMode.CONSTANT_OVER_RANGE, 2.0),
])
def test_gain_modes(mode, expected):
    sc = Scenario((SbsConfig(1, (0, 0, 0.5), 1.0, gamma=3.0, b_self=2.0),), 1.0, mode)
    assert channel_gain(sc, 1, 0.0, 0.0) == pytest.approx(expected)


def test_gain_vanishes_beyond_range():
    sc = Scenario((SbsConfig(1, (0, 0, 0.5), 1.0, radius=1.0),), 1.0, GainMode.CONSTANT_OVER_RANGE)
    assert channel_gain(sc, 1, 0.86, 0.0) > 0
    assert channel_gain(sc, 1, 0.87, 0.0) == 0


def test_cross_gain_constant():
    sc = Scenario((SbsConfig(1, (0, 0, 1), 1.0, b_self=3.0, b_cross=((2, 5.0),)),
                   SbsConfig(2, (1, 0, 1), 1.0)), 1.0, GainMode.CONSTANT_OVER_RANGE)
    assert channel_gain(sc, 1, 0, 0) == 3.0
    assert channel_gain(sc, 1, 0, 0, rx=2) == 5.0


def test_sinr_by_hand():
    sc = Scenario((SbsConfig(1, (0, 0, 0.1), 1.0, b_self=10.0), SbsConfig(2, (0.2, 0, 0.1), 1.0, b_self=4.0)),
                  0.5, GainMode.CONSTANT_OVER_RANGE)
    assert sinr(sc, 1, 0.0, 0.0, [1.0, 0.5]) == pytest.approx(10.0 / (0.5 + 2.0))


def test_vectorised_matches_scalar():
    sc = Scenario((SbsConfig(1, (0, 0, 0.3), 1.0), SbsConfig(2, (0.4, 0.1, 0.3), 1.0)), 0.2)
    xs = np.linspace(-0.5, 0.5, 7)
    vec = sinr(sc, 1, xs, 0.1 * xs, [0.7, 0.3])
    assert vec.tolist() == [sinr(sc, 1, x, 0.1 * x, [0.7, 0.3]) for x in xs]


@pytest.mark.parametrize("kwargs", [
    dict(location=(0, 0, 0.0)), dict(p_max=0.0), dict(gamma=2.0), dict(b_self=-1.0), dict(radius=0.0),
])
def test_sbs_validation(kwargs):
    base = dict(id=1, location=(0, 0, 1), p_max=1.0)
    base.update(kwargs)
    with pytest.raises(InvalidArgumentError):
        SbsConfig(**base)


def test_scenario_validation():
    a = SbsConfig(1, (0, 0, 1), 1.0)
    with pytest.raises(InvalidArgumentError):
        Scenario((a, SbsConfig(2, (0, 0, 1), 1.0)), 1.0)
    with pytest.raises(InvalidArgumentError):
        Scenario((SbsConfig(2, (0, 0, 1), 1.0),), 1.0)
    with pytest.raises(InvalidArgumentError):
        Scenario((a,), 0.0)
    with pytest.raises(InvalidArgumentError):
        Scenario((a,), 1.0).sbs(2)


def test_profile_bounds():
    sc = Scenario((SbsConfig(1, (0, 0, 1), 2.0),), 1.0)
    check_profile(sc, [2.0])
    for bad in ([2.1], [-0.1], [float("nan")], [1.0, 1.0]):
        with pytest.raises(InvalidArgumentError):
            check_profile(sc, bad)


def test_footprint_zero_when_too_high():
    s = SbsConfig(1, (0, 0, 2.0), 1.0, radius=1.0)
    assert s.footprint == 0.0
    assert np.all(s.density.evaluate(np.zeros(3), np.zeros(3), s.footprint) == 0)


@given(st.floats(0.05, 3.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_uniform_density_mass(mass, fx, fy):
    d = DensitySpec("uniform", mass)
    val = d.evaluate(fx * 0.5, fy * 0.5, 1.0)
    assert val == pytest.approx(mass / math.pi)


def test_constant_grid_equals_uniform():
    rho = 0.8
    flat = DensitySpec("grid", grid=((1 / (math.pi * rho * rho),) * 3,) * 3)
    uni = DensitySpec("uniform", 1.0)
    xs = np.linspace(-0.5, 0.5, 11)
    assert np.allclose(flat.evaluate(xs, xs[::-1], rho), uni.evaluate(xs, xs[::-1], rho), rtol=1e-14)


def test_grid_density_validation():
    with pytest.raises(InvalidArgumentError):
        DensitySpec("grid", grid=((1.0,),))
    with pytest.raises(InvalidArgumentError):
        DensitySpec("grid", grid=((1.0, -1.0), (1.0, 1.0)))
    with pytest.raises(InvalidArgumentError):
        DensitySpec("uniform", -1.0)
