"""The cooperative plan and the announcement alphabet."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from ..geometry import Scenario
from ..static_game import TimeSharingSchedule
from .payoff import identification_budget

__all__ = ["StrategyPlan", "build_plan", "cycle_order", "decode_subset", "encode_subset"]

CYCLE_LENGTH = 100
EPS_REL = 1e-6
# (low, high) candidates as fractions of p_max, tried in order; high levels
# keep the identification stages close to the punishment profile
_LEVEL_CANDIDATES = [(round(0.9 - 0.05 * k, 2), round(0.925 - 0.05 * k, 3)) for k in range(17)]


def encode_subset(subset, S: int) -> tuple[int, ...]:
    """Bit ``k`` (1-based) is set iff player ``k`` is in ``subset``."""
    members = set(subset)
    if not members <= set(range(1, S + 1)):
        raise InvalidArgumentError(f"subset {sorted(members)} not within 1..{S}")
    return tuple(1 if k in members else 0 for k in range(1, S + 1))


def decode_subset(bits) -> frozenset:
    return frozenset(k for k, b in enumerate(bits, start=1) if b)


def cycle_order(weights, length: int = CYCLE_LENGTH) -> tuple[int, ...]:
    """Atom index for each stage of one cycle.

    Counts come from largest-remainder rounding of ``weights * length``; the
    order interleaves atoms by always playing the one furthest behind its
    pro-rata count (lowest index on ties).
    """
    w = np.asarray(weights, dtype=float)
    raw = w * length
    counts = np.floor(raw).astype(int)
    rest = length - counts.sum()
    for k in sorted(range(len(w)), key=lambda k: (-(raw[k] - counts[k]), k))[:rest]:
        counts[k] += 1
    used = np.zeros(len(w), dtype=int)
    order = []
    for pos in range(1, length + 1):
        deficit = counts * pos / length - used
        deficit[used >= counts] = -np.inf
        k = int(np.argmax(deficit))
        used[k] += 1
        order.append(k)
    return tuple(order)


@dataclass(frozen=True)
class StrategyPlan:
    """Everything an innocent player needs to follow the strategy.

    ``announcement_low``/``announcement_high`` are the per-player powers
    encoding bits 0 and 1; they differ from every cooperative power and from
    ``p_max`` by far more than ``tolerance``, the per-player threshold used to
    tell two powers apart.
    """

    cooperative_schedule: TimeSharingSchedule
    announcement_low: tuple[float, ...]
    announcement_high: tuple[float, ...]
    block_length: int
    identification_budget: int
    p_max: tuple[float, ...]
    tolerance: tuple[float, ...]
    cycle: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.p_max)

    def cooperative_profile(self, stage: int) -> np.ndarray:
        atom = self.cycle[(stage - 1) % len(self.cycle)]
        return np.array(self.cooperative_schedule.atoms[atom][0])

    def cooperative_power(self, player: int, stage: int) -> float:
        atom = self.cycle[(stage - 1) % len(self.cycle)]
        return self.cooperative_schedule.atoms[atom][0][player - 1]

    def same(self, player: int, a: float, b: float) -> bool:
        return abs(a - b) <= self.tolerance[player - 1]

    def bit_power(self, player: int, bit: int) -> float:
        return (self.announcement_high if bit else self.announcement_low)[player - 1]

    def read_bit(self, player: int, power: float):
        """0 or 1 if ``power`` is one of the player's announcement levels, else None."""
        if self.same(player, power, self.announcement_low[player - 1]):
            return 0
        if self.same(player, power, self.announcement_high[player - 1]):
            return 1
        return None


def build_plan(scenario: Scenario, schedule: TimeSharingSchedule, cycle_length: int = CYCLE_LENGTH) -> StrategyPlan:
    S = scenario.size
    pmax = scenario.p_max
    if any(len(p) != S for p, _ in schedule.atoms):
        raise InvalidArgumentError("schedule profiles do not match the scenario size")
    low, high, tol = [], [], []
    for i in range(S):
        eps = EPS_REL * pmax[i]
        used = [p[i] for p, _ in schedule.atoms] + [pmax[i]]
        for a, b in _LEVEL_CANDIDATES:
            lo, hi = a * pmax[i], b * pmax[i]
            if all(abs(lo - u) > 1e3 * eps and abs(hi - u) > 1e3 * eps for u in used):
                break
        else:  # pragma: no cover - schedules have at most S + 1 atoms
            raise InvalidArgumentError(f"no free announcement levels for player {i + 1}")
        low.append(lo)
        high.append(hi)
        tol.append(eps)
    return StrategyPlan(
        cooperative_schedule=schedule,
        announcement_low=tuple(low),
        announcement_high=tuple(high),
        block_length=S,
        identification_budget=identification_budget(S) if S >= 2 else 0,
        p_max=tuple(float(x) for x in pmax),
        tolerance=tuple(tol),
        cycle=cycle_order(schedule.weights, cycle_length),
    )
