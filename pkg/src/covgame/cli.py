"""Command-line front end: ``covgame region|simulate|verify|threshold``.

Exit codes: 0 success or verified, 1 refuted, 2 input error, 3 resource
cap, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile

from .errors import (CombinatorialCapError, CovgameError, GuaranteeUnavailableError, InfeasibleError,
                     InvalidArgumentError, QuadratureError)
from .repeated import (build_plan, default_library, identification_budget, run_simulation,
                       scenario_threshold, theorem1_threshold, threshold_by_bisection, trace_to_csv,
                       verify_equilibrium)
from .repeated.payoff import check_lambda
from .scenario_io import ScenarioFile, default_scenario, load_deviation, load_scenario
from .static_game import solve_bargaining


EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_CAP, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write(path, text: str) -> None:
    """Write ``text`` to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".covgame-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(args) -> ScenarioFile:
    sf = load_scenario(args.scenario) if args.scenario else default_scenario()
    if args.grid_levels is not None and args.grid_levels < 2:
        raise InvalidArgumentError("--grid-levels must be >= 2")
    return sf


def _grid(args, sf) -> int:
    return args.grid_levels if args.grid_levels is not None else sf.grid_levels


def _bargain(args, sf):
    return solve_bargaining(sf.scenario, sf.quad, _grid(args, sf))


def _thresholds(outcome, S):
    if S < 2:
        return 1.0, list(range(1, S + 1)), 0
    n_bar = identification_budget(S)
    lam_star, degenerate = scenario_threshold(outcome.ideal, outcome.ks_utilities, outcome.disagreement, n_bar)
    return lam_star, degenerate, n_bar


def _lambda(args, sf, lam_star) -> float:
    if args.lam is not None:
        return check_lambda(args.lam)
    if sf.lam is not None:
        return check_lambda(sf.lam)
    return check_lambda(sf.lambda_factor * lam_star)


def cmd_region(args) -> int:
    sf = _load(args)
    out = _bargain(args, sf)
    S = sf.scenario.size
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "index", "weight"] + [f"u_{i}" for i in range(1, S + 1)] + [f"p_{i}" for i in range(1, S + 1)])
    empty = [""] * S
    for k, (p, u) in enumerate(zip(out.region.profiles, out.region.utilities)):
        w.writerow(["point", k, ""] + [_fmt(x) for x in u] + [_fmt(x) for x in p])
    if out.hull.dim == 2:
        for k, v in enumerate(out.hull.vertex_index):
            w.writerow(["hull", k, ""] + [_fmt(x) for x in out.region.utilities[v]]
                       + [_fmt(x) for x in out.region.profiles[v]])
    w.writerow(["ne", 0, ""] + [_fmt(x) for x in out.disagreement] + [_fmt(x) for x in sf.scenario.p_max])
    w.writerow(["ideal", 0, ""] + [_fmt(x) for x in out.ideal] + empty)
    w.writerow(["ks", 0, ""] + [_fmt(x) for x in out.ks_utilities] + empty)
    for k, (p, wt) in enumerate(out.schedule.atoms):
        w.writerow(["atom", k, _fmt(wt)] + empty + [_fmt(x) for x in p])
    _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_simulate(args) -> int:
    sf = _load(args)
    out = _bargain(args, sf)
    S = sf.scenario.size
    lam_star, degenerate, n_bar = _thresholds(out, S)
    lam = _lambda(args, sf, lam_star)
    deviator = load_deviation(args.deviation) if args.deviation else None
    plan = build_plan(sf.scenario, out.schedule)
    trace = run_simulation(sf.scenario, sf.graph, plan, lam, deviator, sf.horizon_tol, sf.quad,
                           allow_unguaranteed=args.allow_unguaranteed, ideal=out.ideal)
    run = trace.run
    lines = [
        f"players: {S}",
        f"lambda: {_fmt(lam)}",
        f"lambda_star: {_fmt(lam_star)}",
        f"lambda_below_threshold: {'yes' if lam < lam_star else 'no'}",
        f"horizon: {trace.horizon}",
        f"tail_bound: {_fmt(trace.tail_bound)}",
        f"identification_budget: {n_bar}",
        f"deviation: {deviator.label() + ' by player ' + str(deviator.player) if deviator else 'none'}",
        f"first_detection: {run.first_detection if run.first_detection is not None else 'none'}",
    ]
    for i in range(1, S + 1):
        conv = run.convictions.get(i)
        conv_txt = f"player {conv[0]} at stage {conv[1]}" if conv else "none"
        lines.append(f"player {i}: discounted_payoff={_fmt(trace.discounted_payoffs[i - 1])} "
                     f"ks={_fmt(out.ks_utilities[i - 1])} conviction={conv_txt}")
    if run.ambiguous:
        lines.append(f"ambiguous: players {run.ambiguous} never narrowed their suspects to one")
    if not run.guaranteed:
        lines.append("note: identification is not guaranteed on this observation graph")
    if degenerate:
        lines.append(f"note: players {degenerate} gain nothing from cooperation and are left out of lambda_star")
    if lam >= lam_star:
        lines.append("warning: lambda >= lambda_star, the equilibrium condition fails")
    summary = "\n".join(lines) + "\n"
    _write(args.out, trace_to_csv(trace))
    (sys.stdout if args.out else sys.stderr).write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    sf = _load(args)
    out = _bargain(args, sf)
    S = sf.scenario.size
    lam_star, degenerate, _ = _thresholds(out, S)
    lam = _lambda(args, sf, lam_star)
    if S < 2:
        raise InvalidArgumentError("verification needs at least two players")
    plan = build_plan(sf.scenario, out.schedule)
    seed = args.seed if args.seed is not None else sf.seed
    library = default_library(plan, seed)
    rep = verify_equilibrium(sf.scenario, sf.graph, plan, lam, library, sf.horizon_tol, sf.quad)
    lines = [f"lambda: {_fmt(lam)}", f"lambda_star: {_fmt(lam_star)}", f"deviations: {len(library)}"]
    for spec, g in zip(rep.deviations, rep.gains):
        lines.append(f"player {spec.player} {spec.label()}: gain={_fmt(g)}")
    for i in range(1, S + 1):
        lines.append(f"player {i}: max_gain={_fmt(rep.max_gain[i - 1])} slack={_fmt(rep.slack[i - 1])}")
    if degenerate:
        lines.append(f"note: players {degenerate} gain nothing from cooperation and are left out of lambda_star")
    lines.append(f"verdict: {'verified' if rep.verified else 'refuted'}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if rep.verified else EXIT_REFUTED


def cmd_threshold(args) -> int:
    sf = _load(args)
    out = _bargain(args, sf)
    S = sf.scenario.size
    if S < 2:
        raise InvalidArgumentError("the threshold needs at least two players")
    n_bar = identification_budget(S)
    lines = [f"identification_budget: {n_bar}"]
    for i in range(S):
        a, b, c = (float(v[i]) for v in (out.ideal, out.ks_utilities, out.disagreement))
        if a == c:
            lines.append(f"player {i + 1}: degenerate (ideal equals Nash utility)")
            continue
        lines.append(f"player {i + 1}: ideal={_fmt(a)} ks={_fmt(b)} ne={_fmt(c)} "
                     f"lambda_star={_fmt(theorem1_threshold(a, b, c, n_bar))} "
                     f"bisection={_fmt(threshold_by_bisection(a, b, c, n_bar))}")
    lam_star, _, _ = _thresholds(out, S)
    lines.append(f"lambda_star: {_fmt(lam_star)}")
    if args.lam is not None:
        lam = check_lambda(args.lam)
        lines.append(f"lambda: {_fmt(lam)} ({'below' if lam < lam_star else 'not below'} lambda_star)")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covgame", description="Coverage power-control games among small base stations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", help="scenario TOML file (default: built-in two-station example)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--grid-levels", type=int, help="power levels per player for the utility region")
        p.add_argument("--seed", type=int, help="seed for randomised deviations")
        p.add_argument("--lambda", dest="lam", type=float, help="per-stage stopping probability (overrides the file)")
        return p

    common(sub.add_parser("region", help="utility region, hull, NE, ideal and KS points as CSV")).set_defaults(func=cmd_region)
    sim = common(sub.add_parser("simulate", help="simulate the repeated game and write the stage trace as CSV"))
    sim.add_argument("--deviation", help="deviation TOML file")
    sim.add_argument("--allow-unguaranteed", action="store_true",
                     help="run even when the observation graph cannot guarantee identification")
    sim.set_defaults(func=cmd_simulate)
    common(sub.add_parser("verify", help="check the strategy against the built-in deviation library")).set_defaults(func=cmd_verify)
    common(sub.add_parser("threshold", help="per-player discount thresholds")).set_defaults(func=cmd_threshold)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CombinatorialCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (QuadratureError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidArgumentError, GuaranteeUnavailableError, CovgameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
