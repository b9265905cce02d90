"""Discounted payoffs and the discount-factor condition for cooperation.

Stage ``t`` (1-based) carries weight ``lam * (1 - lam)**(t - 1)``, where
``lam`` is the per-stage stopping probability.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import DegeneratePlayerError, InvalidArgumentError

__all__ = [
    "check_lambda",
    "deviation_margin",
    "deviation_margin_series",
    "discounted_payoff",
    "horizon_length",
    "identification_budget",
    "scenario_threshold",
    "threshold_by_bisection",
    "theorem1_threshold",
]


def check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise InvalidArgumentError(f"discount parameter must lie in (0, 1), got {lam}")
    return lam


def discounted_payoff(stage_utilities: Sequence[float], lam: float) -> float:
    lam = check_lambda(lam)
    u = np.asarray(stage_utilities, dtype=float)
    weights = lam * (1.0 - lam) ** np.arange(u.size)
    return float(weights @ u)


def horizon_length(lam: float, horizon_tol: float, u_sup: float) -> int:
    """Smallest ``T`` with ``(1 - lam)**T * u_sup < horizon_tol``."""
    lam = check_lambda(lam)
    if horizon_tol <= 0:
        raise InvalidArgumentError("horizon_tol must be > 0")
    if u_sup <= horizon_tol:
        return 1
    T = max(1, math.ceil(math.log(horizon_tol / u_sup) / math.log1p(-lam)))
    while (1.0 - lam) ** T * u_sup >= horizon_tol:
        T += 1
    return T


def identification_budget(S: int) -> int:
    """Stages needed to spread the deviator's identity: ``l * max(1, 2l - 5)`` with ``l = S``."""
    if S < 2:
        raise InvalidArgumentError("identification needs at least two players")
    return S * max(1, 2 * S - 5)


def _check_triplet(ideal, ks, ne):
    if ideal == ne:
        raise DegeneratePlayerError("ideal utility equals Nash utility; cooperation gains nothing")
    if not (ne <= ks <= ideal) or ne > ideal:
        raise InvalidArgumentError(f"need ne <= ks <= ideal, got ne={ne}, ks={ks}, ideal={ideal}")


def theorem1_threshold(ideal: float, ks: float, ne: float, n_bar: int) -> float:
    """Largest discount parameter for which cooperating beats deviating.

    ``1 - ((ideal - ks) / (ideal - ne)) ** (1 / n_bar)``; equals 0 when the
    bargaining utility is the Nash utility and 1 when it is the ideal.
    """
    _check_triplet(ideal, ks, ne)
    if n_bar < 1:
        raise InvalidArgumentError("n_bar must be >= 1")
    ratio = (ideal - ks) / (ideal - ne)
    return 1.0 - ratio ** (1.0 / n_bar)


def deviation_margin(lam: float, ideal: float, ks: float, ne: float, n_bar: int) -> float:
    """Closed-form gain from deviating (normalised to the deviation stage).

    ``(1 - (1-lam)**n_bar) * (ideal - ks) - (1-lam)**n_bar * (ks - ne)``:
    the deviator collects ``ideal`` for ``n_bar`` stages and ``ne`` after,
    against ``ks`` throughout.  Negative means cooperation is preferred.
    """
    q = (1.0 - lam) ** n_bar
    return (1.0 - q) * (ideal - ks) - q * (ks - ne)


def deviation_margin_series(lam: float, ideal: float, ks: float, ne: float, n_bar: int,
                            start_stage: int = 1, horizon: int | None = None) -> float:
    """Same comparison summed stage by stage from ``start_stage``.

    Deviation at ``start_stage`` yields ``ideal`` on stages
    ``start_stage .. start_stage + n_bar - 1`` and ``ne`` afterwards; the
    result is deviation payoff minus cooperation payoff, truncated at
    ``horizon`` stages past the start (default: until weights drop below 1e-18).
    """
    lam = check_lambda(lam)
    if horizon is None:
        horizon = n_bar + horizon_length(lam, 1e-18, 1.0)
    t = np.arange(start_stage, start_stage + horizon)
    w = lam * (1.0 - lam) ** (t - 1)
    dev = np.where(t < start_stage + n_bar, ideal, ne)
    return float(w @ (dev - ks))


def threshold_by_bisection(ideal: float, ks: float, ne: float, n_bar: int, tol: float = 1e-10) -> float:
    """Root of :func:`deviation_margin` in ``lam``, found by bisection on (0, 1)."""
    _check_triplet(ideal, ks, ne)
    if ks == ideal:
        return 1.0
    lo, hi = 0.0, 1.0
    # margin is increasing in lam: negative below the root, positive above
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if deviation_margin(mid, ideal, ks, ne, n_bar) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scenario_threshold(ideal, ks, ne, n_bar: int) -> tuple[float, list[int]]:
    """Minimum per-player threshold and the 1-based ids of degenerate players left out.

    Returns ``(1.0, degenerate)`` when every player is degenerate.
    """
    best = 1.0
    degenerate = []
    for i, (a, b, c) in enumerate(zip(ideal, ks, ne), start=1):
        try:
            best = min(best, theorem1_threshold(float(a), float(b), float(c), n_bar))
        except DegeneratePlayerError:
            degenerate.append(i)
    return best, degenerate
