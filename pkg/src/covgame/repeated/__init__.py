"""Repeated coverage game with neighbour monitoring."""

from .deviation import MODES, DeviationSpec, DeviatorPolicy, default_library
from .engine import (EquilibriumReport, GamePhase, ProtocolRun, SimulationTrace, run_protocol,
                     run_simulation, trace_to_csv, verify_equilibrium)
from .payoff import (deviation_margin, discounted_payoff, horizon_length, identification_budget,
                     scenario_threshold, theorem1_threshold, threshold_by_bisection)
from .plan import StrategyPlan, build_plan, decode_subset, encode_subset

__all__ = [
    "MODES",
    "DeviationSpec",
    "DeviatorPolicy",
    "EquilibriumReport",
    "GamePhase",
    "ProtocolRun",
    "SimulationTrace",
    "StrategyPlan",
    "build_plan",
    "decode_subset",
    "default_library",
    "deviation_margin",
    "discounted_payoff",
    "encode_subset",
    "horizon_length",
    "identification_budget",
    "run_protocol",
    "run_simulation",
    "scenario_threshold",
    "theorem1_threshold",
    "threshold_by_bisection",
    "trace_to_csv",
    "verify_equilibrium",
]
