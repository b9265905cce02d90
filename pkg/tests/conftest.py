import os
import sys

import pytest
from hypothesis import settings

from covgame import DensitySpec, GainMode, SbsConfig, Scenario
from covgame.scenario_io import default_scenario, triangle_scenario

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("covgame", deadline=None, max_examples=40)
settings.load_profile("covgame")


def compound_pair():
    """Two unequal stations, compound path loss, partially overlapping ranges."""
    return Scenario((
        SbsConfig(1, (0.0, 0.0, 0.5), 2.0, gamma=3.0, b_self=1.0, b_cross=((2, 0.5),), radius=1.0,
                  density=DensitySpec("uniform", 1.5)),
        SbsConfig(2, (0.6, 0.2, 0.5), 1.0, gamma=3.0, b_self=1.0, b_cross=((1, 0.5),), radius=1.0,
                  density=DensitySpec("uniform", 1.0)),
    ), 0.1, GainMode.PAPER_COMPOUND)


def symmetric_pair(distance, gain_mode=GainMode.CONSTANT_OVER_RANGE):
    half = distance / 2
    return Scenario(tuple(
        SbsConfig(k, (x, 0.0, 0.1), 1.0, b_self=100.0, b_cross=((3 - k, 100.0),), radius=1.0,
                  density=DensitySpec("uniform", 1.0))
        for k, x in ((1, -half), (2, half))), 1.0, gain_mode)


def as_oracle_stations(scenario):
    return [dict(location=s.location, radius=s.radius, gamma=s.gamma, b_self=s.b_self,
                 b_cross=dict(s.b_cross), mass=s.density.total_mass) for s in scenario.sbs_list]


@pytest.fixture(scope="session")
def fig1():
    return default_scenario()


@pytest.fixture(scope="session")
def triangle():
    return triangle_scenario()


@pytest.fixture(scope="session")
def compound():
    return compound_pair()
