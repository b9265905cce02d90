"""Unilateral deviations used to probe the repeated-game strategy.

All deviators are open-loop: their power at each stage is fixed by their
settings and the plan, not by what they observe.

Modes
-----
max_power
    Full power from ``start_stage`` on.
random
    Uniform power in [0, p_max] each stage from ``start_stage``
    (``params['seed']``).
one_shot
    One off-plan stage (``params['power']``, default p_max, or 0 when the
    plan already asks for p_max), then back to the cooperative plan.
mimic
    Imitates an identifying player: announces subsets in blocks of the
    plan's block length using its own announcement levels.  Subsets come
    from ``params['subsets']`` (cycled) or are drawn at random with
    ``params['seed']``.  With ``params['lead'] == 'max_power'`` the first
    stage is full power and announcing starts one stage later.  After
    ``params['blocks']`` blocks (if given) it plays ``params['then']``:
    ``'max_power'`` or ``'cooperate'``.
script
    Plays ``params['actions']`` from ``start_stage`` on, one entry per
    stage; an entry ``"cooperate"`` means the plan's power.  Cooperates
    after the list runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError
from .plan import StrategyPlan, encode_subset

__all__ = ["DeviationSpec", "DeviatorPolicy", "default_library", "MODES"]

MODES = ("max_power", "mimic", "random", "one_shot", "script")


@dataclass(frozen=True)
class DeviationSpec:
    player: int
    start_stage: int = 1
    mode: str = "max_power"
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgumentError(f"unknown deviation mode {self.mode!r}; choose from {MODES}")
        if int(self.player) < 1:
            raise InvalidArgumentError("deviating player id must be >= 1")
        if int(self.start_stage) < 1:
            raise InvalidArgumentError("start_stage must be >= 1")
        extra = set(self.params) - {"seed", "power", "subsets", "lead", "blocks", "then", "actions"}
        if extra:
            raise InvalidArgumentError(f"unknown deviation params: {sorted(extra)}")

    def label(self) -> str:
        tail = f",{self.params['lead']}" if "lead" in self.params else ""
        return f"{self.mode}{tail}@{self.start_stage}"


class DeviatorPolicy:
    def __init__(self, spec: DeviationSpec, plan: StrategyPlan):
        if spec.player > plan.size:
            raise InvalidArgumentError(f"deviating player {spec.player} not in 1..{plan.size}")
        self.spec = spec
        self.plan = plan
        self.i = spec.player
        self.pmax = plan.p_max[self.i - 1]
        self._rng = np.random.default_rng(spec.params.get("seed", 0))
        self._subsets = [frozenset(s) for s in spec.params.get("subsets", [])]
        self._drawn = []
        levels = [a for a in spec.params.get("actions", ()) if a != "cooperate"]
        if "power" in spec.params:
            levels.append(spec.params["power"])
        for a in levels:
            if isinstance(a, str) or not 0.0 <= float(a) <= self.pmax:
                raise InvalidArgumentError(f"deviation power {a!r} outside [0, p_max] for player {self.i}")

    def _subset(self, block: int):
        if self._subsets:
            return self._subsets[block % len(self._subsets)]
        while len(self._drawn) <= block:
            bits = self._rng.integers(0, 2, self.plan.size)
            self._drawn.append(frozenset(int(k) + 1 for k in np.flatnonzero(bits)))
        return self._drawn[block]

    def action(self, stage: int) -> float:
        spec, plan = self.spec, self.plan
        if stage < spec.start_stage:
            return plan.cooperative_power(self.i, stage)
        k = stage - spec.start_stage
        if spec.mode == "max_power":
            return self.pmax
        if spec.mode == "random":
            return float(self._rng.uniform(0.0, self.pmax))
        if spec.mode == "one_shot":
            if k > 0:
                return plan.cooperative_power(self.i, stage)
            coop = plan.cooperative_power(self.i, stage)
            default = 0.0 if plan.same(self.i, coop, self.pmax) else self.pmax
            return float(spec.params.get("power", default))
        if spec.mode == "script":
            actions = spec.params.get("actions", ())
            if k >= len(actions) or actions[k] == "cooperate":
                return plan.cooperative_power(self.i, stage)
            return float(actions[k])
        # mimic
        if spec.params.get("lead") == "max_power":
            if k == 0:
                return self.pmax
            k -= 1
        block, pos = divmod(k, plan.block_length)
        if "blocks" in spec.params and block >= int(spec.params["blocks"]):
            if spec.params.get("then", "cooperate") == "max_power":
                return self.pmax
            return plan.cooperative_power(self.i, stage)
        bits = encode_subset(self._subset(block), plan.size)
        return plan.bit_power(self.i, bits[pos])


def default_library(plan: StrategyPlan, seed: int = 0) -> list[DeviationSpec]:
    """Every library deviation for every player, started at the first stage of each distinct atom."""
    firsts = {}
    for pos, atom in enumerate(plan.cycle, start=1):
        firsts.setdefault(atom, pos)
    starts = sorted(firsts.values())
    out = []
    for i in range(1, plan.size + 1):
        for s in starts:
            out += [
                DeviationSpec(i, s, "max_power"),
                DeviationSpec(i, s, "mimic", {"lead": "max_power", "seed": seed}),
                DeviationSpec(i, s, "random", {"seed": seed}),
                DeviationSpec(i, s, "one_shot"),
            ]
    return out
