"""Coverage utility: density-weighted spectral efficiency of each station.

``u_i(p) = integral of density_i(x, y) * log2(1 + SINR_i(x, y; p))`` over the
coverage disc of station ``i``, evaluated in polar coordinates centred on
the station's ground projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, QuadratureError
from .geometry import Scenario, check_profile
from .quadrature import player_nodes

__all__ = ["QuadratureSpec", "utility_of", "utility_vector_of", "utility_batch", "utility_matrix"]


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the coarsest level and the refinement stopping rule.

    ``radial_nodes`` is the Gauss-Legendre count per radial segment and
    ``angular_nodes`` the count per angular panel.  Each refinement doubles
    both; the estimate at level ``k`` is accepted once level ``k + 1``
    differs from it by at most ``target_rel_tol`` (relative).
    """

    radial_nodes: int = 8
    angular_nodes: int = 16
    target_rel_tol: float = 1e-6
    max_refinements: int = 5

    def __post_init__(self):
        if self.radial_nodes < 2 or self.angular_nodes < 4:
            raise InvalidArgumentError("need radial_nodes >= 2 and angular_nodes >= 4")
        if not 0 < self.target_rel_tol < 1:
            raise InvalidArgumentError("target_rel_tol must lie in (0, 1)")
        if self.max_refinements < 1:
            raise InvalidArgumentError("max_refinements must be >= 1")

    def level(self, k: int) -> tuple[int, int]:
        return self.radial_nodes << k, self.angular_nodes << k


DEFAULT_QUAD = QuadratureSpec()


def _raw(scenario, i, profiles, nodes):
    weights, gains = player_nodes(scenario, i, *nodes)
    return kernels.utility_rows(weights, gains, i - 1, scenario.noise_power, profiles)


def utility_batch(scenario: Scenario, i: int, profiles, quad: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """Utility of station ``i`` for each row of ``profiles`` (shape (M, S)).

    Each row is refined independently, so a row's value does not depend on
    which other rows share the batch.
    """
    scenario.sbs(i)
    P = np.ascontiguousarray(np.atleast_2d(np.asarray(profiles, dtype=float)))
    if P.shape[1] != scenario.size:
        raise InvalidArgumentError(f"profiles must have {scenario.size} columns")
    pmax = scenario.p_max
    if not np.all(np.isfinite(P)) or np.any(P < 0) or np.any(P > pmax):
        raise InvalidArgumentError("power profile outside [0, p_max]")
    out = np.empty(P.shape[0])
    todo = np.arange(P.shape[0])
    coarse = _raw(scenario, i, P, quad.level(0))
    for k in range(quad.max_refinements):
        fine = _raw(scenario, i, P[todo], quad.level(k + 1))
        ok = (fine == coarse) | (np.abs(fine - coarse) <= quad.target_rel_tol * np.abs(fine))
        out[todo[ok]] = coarse[ok]
        todo, coarse = todo[~ok], fine[~ok]
        if todo.size == 0:
            return out
    bad = todo[0]
    raise QuadratureError(
        f"utility of SBS {i} did not converge to rel tol {quad.target_rel_tol} "
        f"after {quad.max_refinements} refinements (profile {P[bad].tolist()})",
        (float(_raw(scenario, i, P[bad:bad + 1], quad.level(quad.max_refinements - 1))[0]), float(coarse[0])),
    )


def utility_of(scenario: Scenario, i: int, p: Sequence[float], quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    power = check_profile(scenario, p)
    return float(utility_batch(scenario, i, power[None, :], quad)[0])


def utility_matrix(scenario: Scenario, profiles, quad: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """Utility vectors for many profiles at once, shape (M, S)."""
    P = np.atleast_2d(np.asarray(profiles, dtype=float))
    return np.column_stack([utility_batch(scenario, i, P, quad) for i in range(1, scenario.size + 1)])


def utility_vector_of(scenario: Scenario, p: Sequence[float], quad: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    power = check_profile(scenario, p)
    return utility_matrix(scenario, power[None, :], quad)[0]
