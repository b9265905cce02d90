import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covgame.errors import DegeneratePlayerError, InvalidArgumentError
from covgame.repeated import (deviation_margin, discounted_payoff, horizon_length, identification_budget,
                              scenario_threshold, theorem1_threshold, threshold_by_bisection)
from covgame.repeated.payoff import deviation_margin_series


def test_two_stage_example():
    assert discounted_payoff([4.0, 2.0], 0.5) == 2.5


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=60), st.floats(0.01, 0.99))
def test_matches_term_by_term(u, lam):
    ref = 0.0
    for t, x in enumerate(u, start=1):
        ref += lam * (1 - lam) ** (t - 1) * x
    assert discounted_payoff(u, lam) == pytest.approx(ref, abs=1e-12)


@given(st.floats(0.1, 10), st.floats(0.01, 0.99), st.integers(1, 300))
def test_constant_stream_geometric(c, lam, T):
    assert discounted_payoff([c] * T, lam) == pytest.approx(c * (1 - (1 - lam) ** T), abs=1e-12)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.1, 1.5])
def test_lambda_domain(lam):
    with pytest.raises(InvalidArgumentError):
        discounted_payoff([1.0], lam)


@given(st.floats(0.001, 0.9), st.floats(1e-12, 1e-3), st.floats(0.5, 50))
def test_horizon_is_minimal(lam, tol, usup):
    T = horizon_length(lam, tol, usup)
    assert (1 - lam) ** T * usup < tol
    assert T == 1 or (1 - lam) ** (T - 1) * usup >= tol


@pytest.mark.parametrize("S,n", [(2, 2), (3, 3), (4, 12), (5, 25), (6, 42)])
def test_identification_budget(S, n):
    assert identification_budget(S) == n


def test_identification_budget_needs_two():
    with pytest.raises(InvalidArgumentError):
        identification_budget(1)


def test_worked_threshold():
    assert theorem1_threshold(2.0, 1.5, 1.0, 3) == pytest.approx(1 - 0.5 ** (1 / 3))
    assert round(theorem1_threshold(2.0, 1.5, 1.0, 3), 5) == 0.20630


def test_threshold_edges():
    assert theorem1_threshold(2.0, 1.0, 1.0, 3) == 0.0
    assert theorem1_threshold(2.0, 2.0, 1.0, 3) == 1.0
    with pytest.raises(DegeneratePlayerError):
        theorem1_threshold(1.0, 1.0, 1.0, 3)
    with pytest.raises(InvalidArgumentError):
        theorem1_threshold(2.0, 2.5, 1.0, 3)
    with pytest.raises(InvalidArgumentError):
        theorem1_threshold(2.0, 1.5, 1.0, 0)


triplets = st.tuples(st.floats(0.0, 5.0), st.floats(0.01, 0.99), st.floats(0.05, 5.0)).map(
    lambda x: (x[0] + x[2], x[0] + x[1] * x[2], x[0]))


@given(triplets, st.integers(1, 50))
def test_comparator_changes_sign_at_threshold(tr, n):
    ideal, ks, ne = tr
    lam = theorem1_threshold(ideal, ks, ne, n)
    assert threshold_by_bisection(ideal, ks, ne, n) == pytest.approx(lam, abs=1e-10)
    if lam > 1e-6:
        assert deviation_margin(lam * (1 - 1e-4), ideal, ks, ne, n) < 0
    if lam < 1 - 1e-6:
        assert deviation_margin(min(lam * (1 + 1e-4) + 1e-9, 1.0), ideal, ks, ne, n) > 0


@given(triplets, st.integers(1, 40))
def test_threshold_decreasing_in_budget(tr, n):
    assert theorem1_threshold(*tr, n + 1) < theorem1_threshold(*tr, n)


@given(triplets, st.floats(0.01, 0.98))
def test_threshold_increasing_in_ks(tr, bump):
    ideal, ks, ne = tr
    higher = ks + bump * (ideal - ks)
    if higher > ks:
        assert theorem1_threshold(ideal, higher, ne, 5) > theorem1_threshold(ideal, ks, ne, 5)


@given(triplets, st.integers(1, 12), st.floats(0.01, 0.9), st.integers(1, 40))
def test_comparison_does_not_depend_on_start(tr, n, lam, start):
    first = deviation_margin_series(lam, *tr, n, start_stage=1)
    later = deviation_margin_series(lam, *tr, n, start_stage=start)
    scale = (1 - lam) ** (start - 1)
    assert later == pytest.approx(scale * first, rel=1e-9, abs=1e-15)
    closed = deviation_margin(lam, *tr, n)
    if abs(closed) > 1e-9:
        assert np.sign(later) == np.sign(closed)


def test_scenario_threshold_skips_degenerate():
    lam, degen = scenario_threshold([2.0, 3.0], [1.5, 3.0], [1.0, 3.0], 3)
    assert degen == [2]
    assert lam == pytest.approx(theorem1_threshold(2.0, 1.5, 1.0, 3))
    assert scenario_threshold([1.0], [1.0], [1.0], 3) == (1.0, [1])


def test_threshold_formula_by_hand():
    assert theorem1_threshold(6.0, 4.0, 2.0, 2) == pytest.approx(1 - math.sqrt(0.5))
