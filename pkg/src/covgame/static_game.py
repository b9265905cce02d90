"""The one-shot coverage game.

Every station's utility increases with its own power and decreases with
the others', so full power is dominant and the unique Nash equilibrium is
the all-max profile.  Bargaining happens over the convex hull of sampled
utility vectors, with the Nash utilities as disagreement point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import CombinatorialCapError, InfeasibleError, InvalidArgumentError
from .geometry import Scenario
from .hull import Hull, convex_hull, cross
from .utility import DEFAULT_QUAD, QuadratureSpec, utility_batch, utility_matrix, utility_vector_of

__all__ = [
    "BargainingOutcome",
    "DominanceReport",
    "RegionSample",
    "TimeSharingSchedule",
    "ideal_point",
    "ks_parameter",
    "ks_point",
    "nash_equilibrium",
    "power_grid",
    "sample_region",
    "solve_bargaining",
    "time_sharing_for",
    "verify_dominance",
]

DEFAULT_GRID_LEVELS = 21
MAX_REGION_PLAYERS = 4
TIE_BAND = 1e-9


@dataclass(frozen=True)
class RegionSample:
    profiles: np.ndarray
    utilities: np.ndarray
    grid_levels: int

    def __len__(self):
        return len(self.profiles)


@dataclass(frozen=True)
class TimeSharingSchedule:
    """Pure profiles and the fraction of stages each is played."""

    atoms: tuple[tuple[tuple[float, ...], float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise InvalidArgumentError("a schedule needs at least one atom")
        w = [wt for _, wt in self.atoms]
        if min(w) <= 0 or abs(sum(w) - 1.0) > 1e-9:
            raise InvalidArgumentError("atom weights must be positive and sum to one")

    @property
    def profiles(self) -> np.ndarray:
        return np.array([p for p, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])


@dataclass(frozen=True)
class BargainingOutcome:
    disagreement: np.ndarray
    ideal: np.ndarray
    ks_utilities: np.ndarray
    schedule: TimeSharingSchedule
    t_star: float
    region: RegionSample = field(repr=False)
    hull: Hull = field(repr=False)


@dataclass
class DominanceReport:
    checks: int = 0
    violations: list = field(default_factory=list)
    ties: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def nash_equilibrium(scenario: Scenario) -> np.ndarray:
    return scenario.p_max.copy()


def power_grid(scenario: Scenario, grid_levels: int) -> np.ndarray:
    """Full tensor grid of powers, endpoints included; row order is lexicographic in player index."""
    axes = [np.linspace(0.0, s.p_max, grid_levels) for s in scenario.sbs_list]
    for ax, s in zip(axes, scenario.sbs_list):
        ax[-1] = s.p_max
    return np.array(list(itertools.product(*axes)))


def verify_dominance(scenario: Scenario, quad: QuadratureSpec = DEFAULT_QUAD,
                     grid_levels: int = DEFAULT_GRID_LEVELS) -> DominanceReport:
    """Check on a grid that each player's utility peaks at its own max power.

    Differences inside a relative band of 1e-9 count as ties, which is what
    a player with no users (zero density) produces.
    """
    if grid_levels < 3:
        raise InvalidArgumentError("grid_levels must be >= 3")
    S = scenario.size
    grid = power_grid(scenario, grid_levels)
    report = DominanceReport()
    for i in range(1, S + 1):
        u = utility_batch(scenario, i, grid, quad)
        # bring own power to the last axis
        cube = np.moveaxis(u.reshape((grid_levels,) * S), i - 1, -1).reshape(-1, grid_levels)
        prof = np.moveaxis(grid.reshape((grid_levels,) * S + (S,)), i - 1, -2).reshape(-1, grid_levels, S)
        for row, profs in zip(cube, prof):
            report.checks += 1
            top = row[-1]
            band = TIE_BAND * max(1.0, abs(top))
            best = int(np.argmax(row))
            if row[best] - top > band:
                report.violations.append({"player": i, "opponents": profs[-1].tolist(),
                                          "best_power": float(profs[best][i - 1]),
                                          "gain": float(row[best] - top)})
            elif np.any(top - row[:-1] <= band):
                report.ties.append({"player": i, "opponents": profs[-1].tolist()})
    return report


def sample_region(scenario: Scenario, quad: QuadratureSpec = DEFAULT_QUAD,
                  grid_levels: int = DEFAULT_GRID_LEVELS, max_players: int = MAX_REGION_PLAYERS) -> RegionSample:
    if grid_levels < 2:
        raise InvalidArgumentError("grid_levels must be >= 2")
    if scenario.size > max_players:
        raise CombinatorialCapError(
            f"{grid_levels}^{scenario.size} profiles requested; player cap is {max_players}")
    grid = power_grid(scenario, grid_levels)
    return RegionSample(grid, utility_matrix(scenario, grid, quad), grid_levels)


def ideal_point(scenario: Scenario, quad: QuadratureSpec = DEFAULT_QUAD,
                region: RegionSample | None = None) -> np.ndarray:
    """Per-player best utility: own max power, everyone else silent.

    With ``region`` given, also checks that no sampled profile beats it by
    more than the quadrature tolerance.
    """
    S = scenario.size
    ideal = np.empty(S)
    for i in range(1, S + 1):
        p = np.zeros(S)
        p[i - 1] = scenario.sbs(i).p_max
        ideal[i - 1] = utility_batch(scenario, i, p[None, :], quad)[0]
    if region is not None:
        excess = region.utilities.max(axis=0) - ideal
        slack = 10 * quad.target_rel_tol * np.maximum(np.abs(ideal), 1e-300)
        if np.any(excess > slack):
            raise InvalidArgumentError(f"sampled utilities exceed the ideal point by {excess.tolist()}")
    return ideal


def ks_parameter(hull: Hull, disagreement, ideal, tol: float = 1e-10) -> float:
    """Largest ``t`` in [0, 1] with ``d + t (ideal - d)`` in the hull, by bisection."""
    d = np.asarray(disagreement, dtype=float)
    top = np.asarray(ideal, dtype=float)
    if np.allclose(d, top, rtol=0, atol=0):
        raise InvalidArgumentError("ideal point equals the disagreement point")
    if not hull.contains(d, tol=1e-9):
        raise InvalidArgumentError("disagreement point lies outside the hull")
    if hull.contains(top):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if hull.contains(d + mid * (top - d)):
            lo = mid
        else:
            hi = mid
    return lo


def ks_point(hull: Hull, disagreement, ideal, tol: float = 1e-10) -> np.ndarray:
    d = np.asarray(disagreement, dtype=float)
    t = ks_parameter(hull, d, ideal, tol)
    return d + t * (np.asarray(ideal, dtype=float) - d)


def _schedule(profiles, weights) -> TimeSharingSchedule:
    w = np.asarray(weights, dtype=float)
    keep = w > 1e-12
    w = w[keep] / w[keep].sum()
    return TimeSharingSchedule(tuple((tuple(map(float, p)), float(x)) for p, x in zip(np.asarray(profiles)[keep], w)))


def time_sharing_for(region: RegionSample, target, tol: float = 1e-6, hull: Hull | None = None) -> TimeSharingSchedule:
    """Profiles from ``region`` whose weighted utility average reproduces ``target``.

    Returns a single atom when a sampled profile already achieves the target,
    otherwise at most S + 1 atoms.
    """
    target = np.asarray(target, dtype=float)
    U = region.utilities
    dist = np.max(np.abs(U - target), axis=1)
    k = int(np.argmin(dist))
    if dist[k] <= tol:
        return _schedule(region.profiles[[k]], [1.0])
    S = U.shape[1]
    if S == 2:
        sched = _time_sharing_2d(region, target, tol, hull or convex_hull(U))
    else:
        sched = _time_sharing_lp(region, target)
    avg = sched.weights @ np.array([U[_row_of(region, p)] for p in sched.profiles])
    if np.max(np.abs(avg - target)) > tol:
        raise InfeasibleError(f"target {target.tolist()} is not reproduced by any mixture (residual {avg - target})")
    return sched


def _row_of(region, profile):
    return int(np.argmin(np.max(np.abs(region.profiles - profile), axis=1)))


def _time_sharing_2d(region, target, tol, hull):
    U, idx = region.utilities, hull.vertex_index
    scale = hull.scale
    if hull.degenerate or len(idx) < 3:
        pairs = [(idx[0], idx[-1])]
    else:
        pairs = [(idx[k], idx[(k + 1) % len(idx)]) for k in range(len(idx))]
    for a, b in pairs:
        ab = U[b] - U[a]
        length2 = float(ab @ ab)
        s = float((target - U[a]) @ ab) / length2
        if -1e-12 <= s <= 1 + 1e-12 and np.max(np.abs(U[a] + s * ab - target)) <= tol:
            s = min(max(s, 0.0), 1.0)
            return _schedule(region.profiles[[a, b]], [1.0 - s, s])
    if hull.degenerate or len(idx) < 3:
        raise InfeasibleError("target is not on the degenerate hull")
    # fan triangulation from the first vertex
    o = U[idx[0]]
    for k in range(1, len(idx) - 1):
        a, b = U[idx[k]], U[idx[k + 1]]
        area = cross(o, a, b)
        wa = cross(o, target, b) / area
        wb = cross(o, a, target) / area
        wo = 1.0 - wa - wb
        if min(wo, wa, wb) >= -1e-12 * scale:
            return _schedule(region.profiles[[idx[0], idx[k], idx[k + 1]]], np.clip([wo, wa, wb], 0, None))
    raise InfeasibleError(f"target {target.tolist()} lies outside the hull")


def _time_sharing_lp(region, target):
    U = region.utilities
    n, S = U.shape
    a_eq = np.vstack([U.T, np.ones(n)])
    res = linprog(np.zeros(n), A_eq=a_eq, b_eq=np.append(target, 1.0), bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise InfeasibleError(f"target {target.tolist()} lies outside the hull")
    w = res.x
    support = np.flatnonzero(w > 1e-12)
    if len(support) > S + 1:
        raise InfeasibleError("solver returned a non-basic mixture")
    return _schedule(region.profiles[support], w[support])


def solve_bargaining(scenario: Scenario, quad: QuadratureSpec = DEFAULT_QUAD,
                     grid_levels: int = DEFAULT_GRID_LEVELS, region: RegionSample | None = None) -> BargainingOutcome:
    """Disagreement (Nash) point, ideal point, KS point and a schedule realising it."""
    region = region if region is not None else sample_region(scenario, quad, grid_levels)
    ne = utility_vector_of(scenario, nash_equilibrium(scenario), quad)
    ideal = ideal_point(scenario, quad, region)
    hull = convex_hull(region.utilities)
    if np.allclose(ne, ideal, rtol=0, atol=0):
        t = 1.0
        ks = ideal.copy()
    else:
        t = ks_parameter(hull, ne, ideal)
        ks = ne + t * (ideal - ne)
    schedule = time_sharing_for(region, ks, hull=hull if hull.dim == 2 else None)
    return BargainingOutcome(ne, ideal, ks, schedule, t, region, hull)
