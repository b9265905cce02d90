"""Base-station geometry, channel gains and the downlink SINR map.

Mobile stations live on the z = 0 plane.  A base station sits at
``location = (x, y, h)`` with ``h != 0``, so the 3-D distance to any mobile
is at least ``|h|``.  Both the mobile density of a base station and its
transmit range are cut off at 3-D distance ``radius``; on the plane this is
a disc of radius ``sqrt(radius**2 - h**2)`` around ``(x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "DensitySpec",
    "GainMode",
    "SbsConfig",
    "Scenario",
    "distance_to_plane",
    "channel_gain",
    "sinr",
    "check_profile",
]


class GainMode(str, Enum):
    """How the path-loss law is read.

    ``PAPER_COMPOUND`` composes the range-limited amplitude with the path
    loss, giving ``b * d**(-2*gamma)``.  ``STANDARD_PATHLOSS`` is the usual
    ``b * d**(-gamma)`` and ``CONSTANT_OVER_RANGE`` is ``b`` inside range.
    All three are zero beyond the transmitter's radius.
    """

    PAPER_COMPOUND = "paper-compound"
    STANDARD_PATHLOSS = "standard-pathloss"
    CONSTANT_OVER_RANGE = "constant-over-range"


@dataclass(frozen=True)
class DensitySpec:
    """Mobile-station density attached to one base station.

    ``kind="uniform"`` spreads ``total_mass`` evenly over the coverage disc.
    ``kind="grid"`` samples a density (stations per unit area) on a square
    ``grid`` of shape (n, n) spanning ``[-rho, rho]**2`` around the base
    station's ground projection; values are bilinearly interpolated and
    forced to zero outside the disc.
    """

    kind: str = "uniform"
    total_mass: float = 1.0
    grid: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "grid"):
            raise InvalidArgumentError(f"unknown density kind {self.kind!r}")
        if self.kind == "uniform":
            if not (self.total_mass >= 0 and math.isfinite(self.total_mass)):
                raise InvalidArgumentError("total_mass must be finite and >= 0")
        else:
            if self.grid is None:
                raise InvalidArgumentError("grid density needs sample values")
            arr = np.asarray(self.grid, dtype=float)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
                raise InvalidArgumentError("grid must be a square table, at least 2x2")
            if np.any(arr < 0) or not np.all(np.isfinite(arr)):
                raise InvalidArgumentError("grid densities must be finite and >= 0")
            object.__setattr__(self, "grid", tuple(tuple(float(v) for v in row) for row in arr))

    def scaled(self, factor: float) -> "DensitySpec":
        if factor < 0:
            raise InvalidArgumentError("density scale must be >= 0")
        if self.kind == "uniform":
            return DensitySpec("uniform", self.total_mass * factor)
        return DensitySpec("grid", grid=tuple(tuple(v * factor for v in row) for row in self.grid))

    def evaluate(self, dx, dy, rho: float):
        """Density at ground offsets ``(dx, dy)`` from the station; zero outside ``rho``."""
        dx = np.asarray(dx, dtype=float)
        dy = np.asarray(dy, dtype=float)
        inside = dx * dx + dy * dy <= rho * rho
        if rho <= 0:
            return np.zeros(np.broadcast(dx, dy).shape)
        if self.kind == "uniform":
            return np.where(inside, self.total_mass / (math.pi * rho * rho), 0.0)
        arr = np.asarray(self.grid)
        n = arr.shape[0]
        # grid cell coordinates
        gx = np.clip((dx + rho) / (2.0 * rho) * (n - 1), 0.0, n - 1.0)
        gy = np.clip((dy + rho) / (2.0 * rho) * (n - 1), 0.0, n - 1.0)
        ix = np.minimum(gx.astype(int), n - 2)
        iy = np.minimum(gy.astype(int), n - 2)
        fx = gx - ix
        fy = gy - iy
        val = (arr[iy, ix] * (1 - fx) * (1 - fy) + arr[iy, ix + 1] * fx * (1 - fy)
               + arr[iy + 1, ix] * (1 - fx) * fy + arr[iy + 1, ix + 1] * fx * fy)
        return np.where(inside, val, 0.0)


@dataclass(frozen=True)
class SbsConfig:
    """One small base station.

    ``b_cross`` lists ``(victim_id, b)`` pairs giving the cross-gain constant
    from this station towards the users of ``victim_id``; victims that are
    not listed use ``b_self``.
    """

    id: int
    location: tuple[float, float, float]
    p_max: float
    gamma: float = 3.0
    b_self: float = 1.0
    b_cross: tuple[tuple[int, float], ...] = ()
    radius: float = 1.0
    density: DensitySpec = field(default_factory=DensitySpec)

    def __post_init__(self):
        loc = tuple(float(c) for c in self.location)
        if len(loc) != 3:
            raise InvalidArgumentError("location needs three coordinates")
        object.__setattr__(self, "location", loc)
        object.__setattr__(self, "b_cross", tuple((int(k), float(v)) for k, v in self.b_cross))
        if loc[2] == 0.0:
            raise InvalidArgumentError(f"SBS {self.id}: height (third coordinate) must be nonzero")
        if not self.p_max > 0:
            raise InvalidArgumentError(f"SBS {self.id}: p_max must be > 0")
        if not self.gamma > 2:
            raise InvalidArgumentError(f"SBS {self.id}: gamma must be > 2")
        if not self.b_self > 0 or any(v <= 0 for _, v in self.b_cross):
            raise InvalidArgumentError(f"SBS {self.id}: gain constants must be > 0")
        if not self.radius > 0:
            raise InvalidArgumentError(f"SBS {self.id}: radius must be > 0")

    @property
    def ground(self) -> tuple[float, float]:
        return self.location[0], self.location[1]

    @property
    def footprint(self) -> float:
        """Ground radius of the coverage disc (zero when the station is higher than its range)."""
        h = self.location[2]
        return math.sqrt(max(self.radius * self.radius - h * h, 0.0))

    def b_towards(self, victim: int) -> float:
        if victim == self.id:
            return self.b_self
        for k, v in self.b_cross:
            if k == victim:
                return v
        return self.b_self


@dataclass(frozen=True)
class Scenario:
    sbs_list: tuple[SbsConfig, ...]
    noise_power: float
    gain_mode: GainMode = GainMode.PAPER_COMPOUND

    def __post_init__(self):
        sbs = tuple(self.sbs_list)
        object.__setattr__(self, "sbs_list", sbs)
        object.__setattr__(self, "gain_mode", GainMode(self.gain_mode))
        if not sbs:
            raise InvalidArgumentError("a scenario needs at least one SBS")
        for k, s in enumerate(sbs, start=1):
            if s.id != k:
                raise InvalidArgumentError(f"SBS ids must be 1..S in order; got {s.id} at position {k}")
        locs = [s.location for s in sbs]
        if len(set(locs)) != len(locs):
            raise InvalidArgumentError("SBS locations must be pairwise distinct")
        if not self.noise_power > 0:
            raise InvalidArgumentError("noise_power must be > 0")

    @property
    def size(self) -> int:
        return len(self.sbs_list)

    @property
    def p_max(self) -> np.ndarray:
        return np.array([s.p_max for s in self.sbs_list])

    def sbs(self, i: int) -> SbsConfig:
        if not (isinstance(i, (int, np.integer)) and 1 <= i <= self.size):
            raise InvalidArgumentError(f"unknown SBS id {i!r}")
        return self.sbs_list[i - 1]


def distance_to_plane(sbs: SbsConfig, x, y):
    """3-D distance from ``sbs`` to the ground point ``(x, y, 0)``."""
    lx, ly, lz = sbs.location
    d = np.sqrt((np.asarray(x, dtype=float) - lx) ** 2 + (np.asarray(y, dtype=float) - ly) ** 2 + lz * lz)
    return float(d) if d.ndim == 0 else d


def _gain(scenario: Scenario, tx: SbsConfig, victim: int, x, y):
    d = np.asarray(distance_to_plane(tx, x, y))
    b = tx.b_towards(victim)
    mode = scenario.gain_mode
    if mode is GainMode.PAPER_COMPOUND:
        g = b * d ** (-2.0 * tx.gamma)
    elif mode is GainMode.STANDARD_PATHLOSS:
        g = b * d ** (-tx.gamma)
    else:
        g = np.full_like(d, b)
    return np.where(d <= tx.radius, g, 0.0)


def channel_gain(scenario: Scenario, tx: int, x, y, rx: int | None = None):
    """Gain from station ``tx`` to a mobile at ``(x, y)``.

    ``rx`` selects the cross-gain constant used when the mobile belongs to
    another station; by default the own-link constant is used.
    """
    sbs = scenario.sbs(tx)
    victim = tx if rx is None else scenario.sbs(rx).id
    g = _gain(scenario, sbs, victim, x, y)
    return float(g) if g.ndim == 0 else g


def check_profile(scenario: Scenario, p: Sequence[float]) -> np.ndarray:
    """Validate a power profile against the action spaces and return it as an array."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (scenario.size,):
        raise InvalidArgumentError(f"power profile must have length {scenario.size}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > scenario.p_max):
        raise InvalidArgumentError(f"power profile {arr.tolist()} outside [0, p_max]")
    return arr


def sinr(scenario: Scenario, i: int, x, y, p: Sequence[float]):
    """Downlink SINR of station ``i`` at ground point ``(x, y)`` under profile ``p``."""
    power = check_profile(scenario, p)
    own = scenario.sbs(i)
    signal = _gain(scenario, own, i, x, y) * power[i - 1]
    interference = scenario.noise_power
    for j, other in enumerate(scenario.sbs_list, start=1):
        if j != i:
            interference = interference + _gain(scenario, other, i, x, y) * power[j - 1]
    out = signal / interference
    return float(out) if np.ndim(out) == 0 else out
