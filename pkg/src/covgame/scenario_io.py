"""TOML scenario and deviation files.

A scenario file::

    [noise]
    power = 1.0

    [gain]
    mode = "constant-over-range"

    [[sbs]]
    location = [0.0, 0.0, 0.1]
    p_max = 1.0
    b_self = 100.0
    b_cross = [[2, 100.0]]      # optional (victim, b) pairs
    radius = 1.0
    gamma = 3.0
    density = { kind = "uniform", total_mass = 1.0 }

    [graph]
    edges = "1 2"               # edge list, one pair per line; default complete

    [quadrature]                # optional
    [region]                    # optional: grid_levels
    [repeated]                  # optional: lambda or lambda_factor, horizon_tol, seed

Stations are numbered 1..S in file order.  Unknown keys are errors.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InvalidArgumentError
from .geometry import DensitySpec, GainMode, SbsConfig, Scenario
from .graph import ObservationGraph, format_edge_list, parse_edge_list
from .repeated.deviation import DeviationSpec
from .static_game import DEFAULT_GRID_LEVELS
from .utility import DEFAULT_QUAD, QuadratureSpec

__all__ = [
    "ScenarioFile",
    "default_scenario",
    "dump_deviation",
    "dump_scenario",
    "load_deviation",
    "load_scenario",
    "loads_deviation",
    "loads_scenario",
    "triangle_scenario",
]

_TOP = {"noise", "gain", "sbs", "graph", "quadrature", "region", "repeated"}
_SBS = {"location", "p_max", "gamma", "b_self", "b_cross", "radius", "density"}
_DENSITY = {"kind", "total_mass", "grid"}
_QUAD = {"radial_nodes", "angular_nodes", "target_rel_tol", "max_refinements"}
_REPEATED = {"lambda", "lambda_factor", "horizon_tol", "seed"}
_DEVIATION = {"player", "start_stage", "mode", "params"}


@dataclass(frozen=True)
class ScenarioFile:
    scenario: Scenario
    graph: ObservationGraph
    quad: QuadratureSpec = DEFAULT_QUAD
    grid_levels: int = DEFAULT_GRID_LEVELS
    lam: float | None = None
    lambda_factor: float = 0.9
    horizon_tol: float | None = None
    seed: int = 0
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.graph.n != self.scenario.size:
            raise InvalidArgumentError(
                f"graph has {self.graph.n} vertices but the scenario has {self.scenario.size} SBS")
        if self.grid_levels < 2:
            raise InvalidArgumentError("grid_levels must be >= 2")
        if self.lam is not None and not 0 < self.lam < 1:
            raise InvalidArgumentError("lambda must lie in (0, 1)")
        if not 0 < self.lambda_factor < 1:
            raise InvalidArgumentError("lambda_factor must lie in (0, 1)")
        if self.horizon_tol is not None and not self.horizon_tol > 0:
            raise InvalidArgumentError("horizon_tol must be > 0")


def _line_of(text: str, key: str) -> str:
    pat = re.compile(rf"^\s*(\[+\s*)?([\w\-.\"]*\.)?\"?{re.escape(key)}\"?\s*(=|\])")
    for n, line in enumerate(text.splitlines(), start=1):
        if pat.search(line):
            return f"line {n}: "
    return ""


def _check_keys(table, allowed, where, text):
    if not isinstance(table, dict):
        raise InvalidArgumentError(f"{where} must be a table")
    for key in table:
        if key not in allowed:
            raise InvalidArgumentError(f"{_line_of(text, key)}unknown key {key!r} in {where}")


def _parse(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidArgumentError(f"malformed TOML: {exc}") from None


def _density(raw, where, text) -> DensitySpec:
    if raw is None:
        return DensitySpec()
    _check_keys(raw, _DENSITY, where, text)
    grid = raw.get("grid")
    if grid is not None:
        grid = tuple(tuple(float(v) for v in row) for row in grid)
    return DensitySpec(raw.get("kind", "uniform"), float(raw.get("total_mass", 1.0)), grid)


def loads_scenario(text: str) -> ScenarioFile:
    data = _parse(text)
    _check_keys(data, _TOP, "the top level", text)
    try:
        noise = data.get("noise", {})
        _check_keys(noise, {"power"}, "[noise]", text)
        gain = data.get("gain", {})
        _check_keys(gain, {"mode"}, "[gain]", text)
        raw_sbs = data.get("sbs")
        if not raw_sbs:
            raise InvalidArgumentError("scenario needs at least one [[sbs]] entry")
        stations = []
        for k, s in enumerate(raw_sbs, start=1):
            _check_keys(s, _SBS, f"[[sbs]] #{k}", text)
            if "location" not in s or "p_max" not in s:
                raise InvalidArgumentError(f"[[sbs]] #{k} needs location and p_max")
            stations.append(SbsConfig(
                id=k, location=tuple(s["location"]), p_max=float(s["p_max"]),
                gamma=float(s.get("gamma", 3.0)), b_self=float(s.get("b_self", 1.0)),
                b_cross=tuple((int(v), float(b)) for v, b in s.get("b_cross", [])),
                radius=float(s.get("radius", 1.0)), density=_density(s.get("density"), f"[[sbs]] #{k} density", text)))
        scenario = Scenario(tuple(stations), float(noise.get("power", 1.0)),
                            GainMode(gain.get("mode", GainMode.PAPER_COMPOUND.value)))
        g = data.get("graph", {})
        _check_keys(g, {"edges"}, "[graph]", text)
        S = scenario.size
        graph = parse_edge_list(g["edges"], S) if "edges" in g else ObservationGraph.complete(S)
        q = data.get("quadrature", {})
        _check_keys(q, _QUAD, "[quadrature]", text)
        quad = QuadratureSpec(**q)
        region = data.get("region", {})
        _check_keys(region, {"grid_levels"}, "[region]", text)
        rep = data.get("repeated", {})
        _check_keys(rep, _REPEATED, "[repeated]", text)
        if "lambda" in rep and "lambda_factor" in rep:
            raise InvalidArgumentError("[repeated] takes lambda or lambda_factor, not both")
        return ScenarioFile(
            scenario, graph, quad,
            grid_levels=int(region.get("grid_levels", DEFAULT_GRID_LEVELS)),
            lam=float(rep["lambda"]) if "lambda" in rep else None,
            lambda_factor=float(rep.get("lambda_factor", 0.9)),
            horizon_tol=float(rep["horizon_tol"]) if "horizon_tol" in rep else None,
            seed=int(rep.get("seed", 0)))
    except (TypeError, KeyError) as exc:
        raise InvalidArgumentError(f"bad scenario value: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"bad scenario value: {exc}") from None


def load_scenario(path) -> ScenarioFile:
    with open(path, encoding="utf-8") as fh:
        return loads_scenario(fh.read())


def _density_table(d: DensitySpec) -> dict:
    if d.kind == "uniform":
        return {"kind": "uniform", "total_mass": d.total_mass}
    return {"kind": "grid", "grid": [list(row) for row in d.grid]}


def dump_scenario(sf: ScenarioFile) -> str:
    """Canonical TOML; ``loads_scenario(dump_scenario(x)) == x``."""
    sc = sf.scenario
    out = {
        "noise": {"power": sc.noise_power},
        "gain": {"mode": sc.gain_mode.value},
        "sbs": [],
        "graph": {"edges": format_edge_list(sf.graph)},
        "quadrature": {"radial_nodes": sf.quad.radial_nodes, "angular_nodes": sf.quad.angular_nodes,
                       "target_rel_tol": sf.quad.target_rel_tol, "max_refinements": sf.quad.max_refinements},
        "region": {"grid_levels": sf.grid_levels},
        "repeated": {"seed": sf.seed},
    }
    for s in sc.sbs_list:
        entry = {"location": list(s.location), "p_max": s.p_max, "gamma": s.gamma, "b_self": s.b_self,
                 "radius": s.radius, "density": _density_table(s.density)}
        if s.b_cross:
            entry["b_cross"] = [[k, v] for k, v in s.b_cross]
        out["sbs"].append(entry)
    if sf.lam is not None:
        out["repeated"]["lambda"] = sf.lam
    else:
        out["repeated"]["lambda_factor"] = sf.lambda_factor
    if sf.horizon_tol is not None:
        out["repeated"]["horizon_tol"] = sf.horizon_tol
    return tomli_w.dumps(out)


def _symmetric(locations, graph) -> ScenarioFile:
    S = len(locations)
    stations = tuple(
        SbsConfig(k, loc, 1.0, b_self=100.0, b_cross=tuple((j, 100.0) for j in range(1, S + 1) if j != k),
                  radius=1.0, density=DensitySpec("uniform", 1.0))
        for k, loc in enumerate(locations, start=1))
    return ScenarioFile(Scenario(stations, 1.0, GainMode.CONSTANT_OVER_RANGE), graph)


def default_scenario() -> ScenarioFile:
    """Two identical stations 0.5 apart with heavily overlapping ranges, observing each other."""
    return _symmetric([(-0.25, 0.0, 0.1), (0.25, 0.0, 0.1)], ObservationGraph.complete(2))


def triangle_scenario(side: float = 0.5) -> ScenarioFile:
    """Three identical stations on an equilateral triangle, complete observation graph."""
    r = side / math.sqrt(3.0)
    locs = [(round(r * math.cos(math.pi / 2 + 2 * math.pi * k / 3), 12),
             round(r * math.sin(math.pi / 2 + 2 * math.pi * k / 3), 12), 0.1) for k in range(3)]
    return _symmetric(locs, ObservationGraph.complete(3))


def loads_deviation(text: str) -> DeviationSpec:
    """Read ``[deviation]`` with player, start_stage, mode and an optional params table."""
    data = _parse(text)
    _check_keys(data, {"deviation"}, "the top level", text)
    if "deviation" not in data:
        raise InvalidArgumentError("missing [deviation] table")
    d = data["deviation"]
    _check_keys(d, _DEVIATION, "[deviation]", text)
    if "player" not in d:
        raise InvalidArgumentError("[deviation] needs player")
    params = dict(d.get("params", {}))
    if "subsets" in params:
        params["subsets"] = [tuple(int(v) for v in s) for s in params["subsets"]]
    try:
        return DeviationSpec(int(d["player"]), int(d.get("start_stage", 1)), str(d.get("mode", "max_power")), params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgumentError):
            raise InvalidArgumentError(f"{_line_of(text, 'params')}{exc}") from None
        raise InvalidArgumentError(f"bad deviation value: {exc}") from None


def load_deviation(path) -> DeviationSpec:
    with open(path, encoding="utf-8") as fh:
        return loads_deviation(fh.read())


def dump_deviation(spec: DeviationSpec) -> str:
    body = {"player": spec.player, "start_stage": spec.start_stage, "mode": spec.mode}
    if spec.params:
        params = dict(spec.params)
        if "subsets" in params:
            params["subsets"] = [sorted(s) for s in params["subsets"]]
        body["params"] = params
    return tomli_w.dumps({"deviation": body})
