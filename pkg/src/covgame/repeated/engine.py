"""Stage-by-stage simulation of the repeated game with neighbour monitoring.

Each innocent station follows the same strategy:

* Cooperative: play the plan's schedule.  The first stage a neighbour is
  seen off-plan, move to Identification at the next stage.
* Identification: keep a set of suspects, each paired with the deviation
  stage implied by the hop distance, and announce the set in blocks of
  ``S`` stages (one bit per player).  Suspects are filtered every stage
  against everything observed so far.  Once the set is a singleton, one
  more block announces it, then the station punishes.
* Punishment (absorbing): full power if the convicted player is a
  neighbour, otherwise the cooperative schedule.

The filter only discards a suspect ``k`` when some observation is
impossible if ``k`` were the sole deviator, so the true deviator is never
discarded.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import GuaranteeUnavailableError, InvalidArgumentError
from ..geometry import Scenario
from ..graph import ObservationGraph
from ..static_game import ideal_point
from ..utility import DEFAULT_QUAD, QuadratureSpec, utility_matrix
from .deviation import DeviationSpec, DeviatorPolicy
from .payoff import check_lambda, horizon_length
from .plan import StrategyPlan

__all__ = [
    "COOPERATIVE",
    "DEVIATING",
    "IDENTIFICATION",
    "PUNISHMENT",
    "EquilibriumReport",
    "GamePhase",
    "ProtocolRun",
    "SimulationTrace",
    "run_protocol",
    "run_simulation",
    "trace_to_csv",
    "verify_equilibrium",
]

COOPERATIVE = "cooperative"
IDENTIFICATION = "identification"
PUNISHMENT = "punishment"
DEVIATING = "deviating"


@dataclass(frozen=True)
class GamePhase:
    """Phase of one player at one stage.

    ``hypotheses`` holds ``(suspect, deviation_stage)`` pairs while
    identifying; ``deviator`` is the convicted player while punishing.
    """

    tag: str
    entered_at: int | None = None
    block_index: int | None = None
    hypotheses: frozenset = frozenset()
    deviator: int | None = None

    @property
    def suspects(self) -> frozenset:
        return frozenset(k for k, _ in self.hypotheses)


_COOP = GamePhase(COOPERATIVE)
_DEV = GamePhase(DEVIATING)


class _Decoder:
    """Incremental check of neighbour ``j``'s announcements under suspect ``k``.

    ``j`` is expected to start announcing at stage ``start``.  Within each
    block the bits must be on ``j``'s alphabet, clear for ``j`` itself, set
    for ``k``, and a subset of the previous block.  After ``j`` completes a
    singleton block it has moved on and later stages are ignored.
    """

    __slots__ = ("plan", "j", "k", "start", "next", "prev", "cur", "done", "ok")

    def __init__(self, plan: StrategyPlan, j: int, k: int, start: int):
        self.plan, self.j, self.k, self.start = plan, j, k, start
        self.next = start
        self.prev = None
        self.cur = []
        self.done = False
        self.ok = True

    def feed(self, seen: dict, upto: int) -> bool:
        """Consume observations up to stage ``upto``; False once inconsistent."""
        l = self.plan.block_length
        while self.ok and not self.done and self.next <= upto:
            s = self.next
            pos = (s - self.start) % l
            b = self.plan.read_bit(self.j, seen[s])
            if b is None or (b and pos + 1 == self.j) or (not b and pos + 1 == self.k) \
                    or (b and self.prev is not None and not self.prev[pos]):
                self.ok = False
                break
            self.cur.append(b)
            self.next += 1
            if pos == l - 1:
                if sum(self.cur) == 1:
                    self.done = True
                self.prev, self.cur = self.cur, []
        return self.ok


class _Monitor:
    """Strategy of one innocent player, driven by its private history."""

    def __init__(self, owner: int, graph: ObservationGraph, dist: dict, plan: StrategyPlan):
        self.i = owner
        self.plan = plan
        self.dist = dist
        self.nbrs = sorted(graph.neighbors(owner))
        self.seen = {j: {} for j in self.nbrs}
        self.first_off = {j: None for j in self.nbrs}
        self.phase = _COOP
        self.entry = None
        self.suspects = None  # suspect -> implied deviation stage
        self.decoders = {}
        self.block = None
        self.block_start = None
        self.block_index = 0
        self.conviction = None  # (suspect, stage)
        self.target = None

    def observe(self, stage: int, powers) -> None:
        plan = self.plan
        for j in self.nbrs:
            p = float(powers[j - 1])
            self.seen[j][stage] = p
            if self.first_off[j] is None and not plan.same(j, p, plan.cooperative_power(j, stage)):
                self.first_off[j] = stage

    def _start_identification(self, t: int) -> None:
        self.entry = t
        self.suspects = {}
        for k in range(1, self.plan.size + 1):
            d = self.dist[self.i][k]
            if k != self.i and d != math.inf and t - d >= 1:
                self.suspects[k] = t - d
        self.block_start = t
        self.block_index = 0

    def _consistent(self, k: int, t0: int, t: int) -> bool:
        for j in self.nbrs:
            fo = self.first_off[j]
            if j == k:
                if fo != t0:
                    return False
                continue
            f = t0 + self.dist[j][k]
            if f > t - 1:
                if fo is not None:
                    return False
                continue
            if fo != f:
                return False
            dec = self.decoders.get((j, k))
            if dec is None:
                dec = self.decoders[(j, k)] = _Decoder(self.plan, j, k, f)
            if not dec.feed(self.seen[j], t - 1):
                return False
        return True

    def _filter(self, t: int) -> None:
        self.suspects = {k: t0 for k, t0 in self.suspects.items() if self._consistent(k, t0, t)}
        if len(self.suspects) == 1 and self.conviction is None:
            self.conviction = (next(iter(self.suspects)), t)

    def act(self, t: int) -> float:
        plan = self.plan
        if self.phase.tag == COOPERATIVE:
            if all(fo is None for fo in self.first_off.values()):
                return plan.cooperative_power(self.i, t)
            self._start_identification(t)
            self._filter(t)
            self.block = frozenset(self.suspects)
        elif self.phase.tag == IDENTIFICATION:
            if len(self.suspects) > 1:
                self._filter(t)
            if (t - self.block_start) % plan.block_length == 0:
                if len(self.block) == 1:
                    self.target = next(iter(self.block))
                    self.phase = GamePhase(PUNISHMENT, deviator=self.target)
                else:
                    self.block = frozenset(self.suspects)
                    self.block_start = t
                    self.block_index += 1
        if self.phase.tag == PUNISHMENT:
            if self.target in self.nbrs:
                return plan.p_max[self.i - 1]
            return plan.cooperative_power(self.i, t)
        self.phase = GamePhase(IDENTIFICATION, self.entry, self.block_index,
                               frozenset(self.suspects.items()))
        pos = t - self.block_start
        return plan.bit_power(self.i, int(pos + 1 in self.block))


@dataclass
class ProtocolRun:
    """Actions and phases of every player, without utilities."""

    powers: np.ndarray  # (T, S)
    phases: list  # per stage, tuple of GamePhase
    deviators: tuple
    convictions: dict  # innocent -> (suspect, stage)
    first_detection: int | None
    guaranteed: bool

    @property
    def horizon(self) -> int:
        return len(self.powers)

    @property
    def ambiguous(self) -> list[int]:
        """Innocents that detected something but never narrowed it to one suspect."""
        out = []
        last = self.phases[-1] if self.phases else ()
        for i, ph in enumerate(last, start=1):
            if i not in self.deviators and ph.tag == IDENTIFICATION and len(ph.hypotheses) != 1:
                out.append(i)
        return out


def run_protocol(graph: ObservationGraph, plan: StrategyPlan, deviations: Sequence[DeviationSpec] = (),
                 horizon: int = 100, stop_when_settled: bool = False) -> ProtocolRun:
    """Play the strategy for ``horizon`` stages with the given deviators.

    With ``stop_when_settled`` the run ends early once every innocent is
    punishing (nothing changes after that).
    """
    S = plan.size
    if graph.n != S:
        raise InvalidArgumentError(f"graph has {graph.n} vertices but the plan has {S} players")
    if horizon < 1:
        raise InvalidArgumentError("horizon must be >= 1")
    policies = {}
    for spec in deviations:
        if spec.player in policies:
            raise InvalidArgumentError(f"player {spec.player} is given two deviations")
        policies[spec.player] = DeviatorPolicy(spec, plan)
    dist = graph.shortest_path_lengths()
    monitors = {i: _Monitor(i, graph, dist, plan) for i in range(1, S + 1) if i not in policies}
    two_conn = graph.is_two_connected() or (S == 2 and graph.is_complete())
    guaranteed = two_conn and len(policies) <= 1

    rows, phases = [], []
    first_detection = None
    for t in range(1, horizon + 1):
        if rows:
            for m in monitors.values():
                m.observe(t - 1, rows[-1])
        p = np.empty(S)
        ph = []
        for i in range(1, S + 1):
            if i in policies:
                pol = policies[i]
                p[i - 1] = pol.action(t)
                ph.append(_DEV if t >= pol.spec.start_stage else _COOP)
            else:
                m = monitors[i]
                p[i - 1] = m.act(t)
                ph.append(m.phase)
        if first_detection is None and any(m.entry is not None for m in monitors.values()):
            first_detection = t
        rows.append(p)
        phases.append(tuple(ph))
        if stop_when_settled and monitors and all(m.phase.tag == PUNISHMENT for m in monitors.values()):
            break
    convictions = {i: m.conviction for i, m in monitors.items() if m.conviction is not None}
    return ProtocolRun(np.array(rows), phases, tuple(sorted(policies)), convictions, first_detection, guaranteed)


@dataclass
class SimulationTrace:
    run: ProtocolRun
    utilities: np.ndarray  # (T, S)
    discount: float
    discounted_payoffs: np.ndarray
    tail_bound: float
    horizon_tol: float
    ideal: np.ndarray = field(repr=False)

    @property
    def horizon(self) -> int:
        return self.run.horizon

    @property
    def powers(self) -> np.ndarray:
        return self.run.powers

    @property
    def stages(self):
        """``(stage, phases, powers, utilities)`` per stage, 1-based."""
        for t in range(self.horizon):
            yield t + 1, self.run.phases[t], self.run.powers[t], self.utilities[t]

    def stage_weights(self) -> np.ndarray:
        lam = self.discount
        return lam * (1.0 - lam) ** np.arange(self.horizon)

    def cycling_error(self, target) -> np.ndarray:
        """Per-player bound on |discounted payoff - (1 - (1-lam)^T) target| from the stage ordering.

        By summation by parts the difference is at most
        ``lam * max_t |sum_{s<=t} (u(s) - target)|``.
        """
        partial = np.cumsum(self.utilities - np.asarray(target, dtype=float), axis=0)
        return self.discount * np.max(np.abs(partial), axis=0)


def _stage_utilities(scenario, powers, quad):
    uniq, inverse = np.unique(powers, axis=0, return_inverse=True)
    return utility_matrix(scenario, uniq, quad)[inverse.reshape(-1)]


def run_simulation(scenario: Scenario, graph: ObservationGraph, plan: StrategyPlan, lam: float,
                   deviator: DeviationSpec | None = None, horizon_tol: float | None = None,
                   quad: QuadratureSpec = DEFAULT_QUAD, allow_unguaranteed: bool = False,
                   ideal=None) -> SimulationTrace:
    """Simulate until the discounted tail ``(1-lam)^T * max ideal`` drops below ``horizon_tol``.

    Graphs that are not 2-connected (for S = 2: missing the edge) raise
    :class:`GuaranteeUnavailableError` unless ``allow_unguaranteed``.
    """
    lam = check_lambda(lam)
    S = scenario.size
    if graph.n != S or plan.size != S:
        raise InvalidArgumentError("scenario, graph and plan disagree on the number of players")
    ok = graph.is_two_connected() if S >= 3 else graph.is_complete()
    if not ok and not allow_unguaranteed:
        raise GuaranteeUnavailableError(
            "identification is only guaranteed on 2-connected observation graphs")
    ideal = ideal_point(scenario, quad) if ideal is None else np.asarray(ideal, dtype=float)
    u_sup = float(np.max(ideal))
    if horizon_tol is None:
        horizon_tol = 1e-9 * u_sup
    if horizon_tol <= 0:
        raise InvalidArgumentError("horizon_tol must be > 0")
    T = horizon_length(lam, horizon_tol, u_sup)
    run = run_protocol(graph, plan, [deviator] if deviator is not None else [], T)
    run.guaranteed = run.guaranteed and ok
    U = _stage_utilities(scenario, run.powers, quad)
    w = lam * (1.0 - lam) ** np.arange(T)
    return SimulationTrace(run, U, lam, w @ U, (1.0 - lam) ** T * u_sup, horizon_tol, ideal)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trace_to_csv(trace: SimulationTrace) -> str:
    S = trace.powers.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stage"] + [f"phase_{i}" for i in range(1, S + 1)]
               + [f"power_{i}" for i in range(1, S + 1)] + [f"utility_{i}" for i in range(1, S + 1)])
    for t, ph, p, u in trace.stages:
        w.writerow([t] + [x.tag for x in ph] + [_fmt(x) for x in p] + [_fmt(x) for x in u])
    return buf.getvalue()


@dataclass
class EquilibriumReport:
    """Deviation gains against the cooperative run.

    ``gains[k]`` is the deviator's discounted payoff under ``deviations[k]``
    minus its cooperative payoff.  ``slack`` is the per-player numerical
    allowance (quadrature tolerance on the ideal utility plus twice the
    truncation tail).
    """

    deviations: list
    gains: np.ndarray
    max_gain: np.ndarray
    slack: np.ndarray
    baseline: np.ndarray
    convictions: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return bool(np.all(self.max_gain <= self.slack))

    @property
    def strict(self) -> bool:
        """Every gain is negative by more than the slack."""
        return bool(np.all(self.max_gain < -self.slack))


def verify_equilibrium(scenario: Scenario, graph: ObservationGraph, plan: StrategyPlan, lam: float,
                       library: Sequence[DeviationSpec], horizon_tol: float | None = None,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> EquilibriumReport:
    if not library:
        raise InvalidArgumentError("deviation library is empty")
    ideal = ideal_point(scenario, quad)
    base = run_simulation(scenario, graph, plan, lam, None, horizon_tol, quad, ideal=ideal)
    S = scenario.size
    gains = np.empty(len(library))
    max_gain = np.full(S, -np.inf)
    convictions = []
    for n, spec in enumerate(library):
        tr = run_simulation(scenario, graph, plan, lam, spec, horizon_tol, quad, ideal=ideal)
        i = spec.player - 1
        gains[n] = tr.discounted_payoffs[i] - base.discounted_payoffs[i]
        max_gain[i] = max(max_gain[i], gains[n])
        convictions.append(dict(tr.run.convictions))
    slack = quad.target_rel_tol * ideal + 2.0 * base.tail_bound
    return EquilibriumReport(list(library), gains, max_gain, slack, base.discounted_payoffs, convictions)
