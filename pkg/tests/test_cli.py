import csv
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from conftest import symmetric_pair
from covgame import cli
from covgame.graph import ObservationGraph
from covgame.scenario_io import ScenarioFile, dump_scenario, triangle_scenario
from covgame.utility import QuadratureSpec

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def summary_dict(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line and not line.startswith("player"))


def test_region_default(tmp_path):
    out = tmp_path / "r.csv"
    assert cli.main(["region", "--out", str(out), "--grid-levels", "6"]) == 0
    data = rows(out)
    kinds = {r["kind"] for r in data}
    assert kinds == {"point", "hull", "ne", "ideal", "ks", "atom"}
    assert sum(r["kind"] == "point" for r in data) == 36
    ne = next(r for r in data if r["kind"] == "ne")
    ks = next(r for r in data if r["kind"] == "ks")
    assert all(float(ks[k]) >= float(ne[k]) for k in ("u_1", "u_2"))
    atoms = [r for r in data if r["kind"] == "atom"]
    assert sum(float(a["weight"]) for a in atoms) == pytest.approx(1.0)


def test_region_single_station(tmp_path):
    text = "[[sbs]]\nlocation = [0.0, 0.0, 0.1]\np_max = 1.0\nb_self = 100.0\n[gain]\nmode = 'constant-over-range'\n"
    out = tmp_path / "r.csv"
    assert cli.main(["region", "--scenario", write(tmp_path, "s.toml", text), "--out", str(out), "--grid-levels", "5"]) == 0
    data = {r["kind"]: r for r in rows(out) if r["kind"] != "point"}
    assert float(data["ks"]["u_1"]) == pytest.approx(float(data["ideal"]["u_1"]))
    assert float(data["ne"]["u_1"]) == pytest.approx(float(data["ideal"]["u_1"]))


def test_malformed_file_leaves_nothing(tmp_path, capsys):
    out = tmp_path / "r.csv"
    bad = write(tmp_path, "bad.toml", "[[sbs]]\nlocation = [0, 0, 0.1]\np_max = 1.0\nwobble = 2\n")
    assert cli.main(["region", "--scenario", bad, "--out", str(out)]) == 2
    assert "line 4" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == [pathlib.Path(bad)]


def test_missing_file_is_input_error(tmp_path):
    assert cli.main(["region", "--scenario", str(tmp_path / "nope.toml")]) == 2


def test_cap_exit_code(tmp_path):
    text = "".join(f"[[sbs]]\nlocation = [{k}.0, 0.0, 0.1]\np_max = 1.0\n" for k in range(5))
    assert cli.main(["region", "--scenario", write(tmp_path, "big.toml", text), "--grid-levels", "2"]) == 3


def test_numerical_failure_exit_code(tmp_path):
    sf = ScenarioFile(symmetric_pair(0.5), ObservationGraph.complete(2),
                      QuadratureSpec(2, 4, 1e-14, 1))
    assert cli.main(["region", "--scenario", write(tmp_path, "q.toml", dump_scenario(sf)), "--grid-levels", "2"]) == 4


def test_simulate_without_deviation(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert cli.main(["simulate", "--out", str(out), "--grid-levels", "6"]) == 0
    summ = summary_dict(capsys.readouterr().out)
    assert summ["first_detection"] == "none" and summ["lambda_below_threshold"] == "yes"
    data = rows(out)
    assert len(data) == int(summ["horizon"])
    assert {r["phase_1"] for r in data} == {r["phase_2"] for r in data} == {"cooperative"}


def test_simulate_max_power_triangle(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code = cli.main(["simulate", "--scenario", str(SCENARIOS / "triangle.toml"), "--deviation",
                     str(SCENARIOS / "dev_max3.toml"), "--out", str(out), "--grid-levels", "6"])
    assert code == 0
    text = capsys.readouterr().out
    summ = summary_dict(text)
    detect = int(summ["first_detection"])
    for i in (1, 2):
        line = next(l for l in text.splitlines() if l.startswith(f"player {i}:"))
        stage = int(line.rsplit("stage ", 1)[1])
        assert "conviction=player 3" in line and stage - detect <= int(summ["identification_budget"])


def test_simulate_warns_above_threshold(tmp_path, capsys):
    assert cli.main(["simulate", "--out", str(tmp_path / "t.csv"), "--lambda", "0.5", "--grid-levels", "6"]) == 0
    assert "warning: lambda >= lambda_star" in capsys.readouterr().out


def test_simulate_path_needs_flag(tmp_path, capsys):
    args = ["simulate", "--scenario", str(SCENARIOS / "path3.toml"), "--deviation", str(SCENARIOS / "dev_max1.toml"),
            "--out", str(tmp_path / "t.csv"), "--grid-levels", "5"]
    assert cli.main(args) == 2
    assert cli.main(args + ["--allow-unguaranteed"]) == 0
    assert "ambiguous: players [3]" in capsys.readouterr().out


def test_verify_below_threshold(tmp_path):
    out = tmp_path / "v.txt"
    assert cli.main(["verify", "--scenario", str(SCENARIOS / "triangle.toml"), "--out", str(out),
                     "--grid-levels", "6"]) == 0
    text = out.read_text()
    assert text.strip().endswith("verdict: verified")
    assert text.count("max_gain=-") == 3


def test_verify_refuted_when_impatient(tmp_path):
    assert cli.main(["verify", "--lambda", "0.6", "--out", str(tmp_path / "v.txt"), "--grid-levels", "6"]) == 1


def test_verify_rejects_boundary_lambda(tmp_path):
    assert cli.main(["verify", "--lambda", "0", "--grid-levels", "6"]) == 2


def test_verify_notes_degenerate_players(tmp_path):
    sf = ScenarioFile(symmetric_pair(2.5), ObservationGraph.complete(2))
    out = tmp_path / "v.txt"
    code = cli.main(["verify", "--scenario", write(tmp_path, "d.toml", dump_scenario(sf)), "--out", str(out),
                     "--grid-levels", "3"])
    assert code == 0
    assert "players [1, 2] gain nothing from cooperation" in out.read_text()


def test_threshold_command(capsys):
    assert cli.main(["threshold", "--grid-levels", "6", "--lambda", "0.01"]) == 0
    text = capsys.readouterr().out
    lam_star = float(summary_dict(text)["lambda_star"])
    assert 0 < lam_star < 1
    assert "below lambda_star" in text


def test_console_script_runs(tmp_path):
    out = tmp_path / "t.txt"
    res = subprocess.run([sys.executable, "-m", "covgame.cli", "threshold", "--out", str(out), "--grid-levels", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert out.read_text().startswith("identification_budget: 2")


def test_pure_python_backend_gives_same_region(tmp_path):
    paths = []
    for flag in ("0", "1"):
        out = tmp_path / f"r{flag}.csv"
        env = {"COVGAME_PURE_PYTHON": flag, "PATH": "/usr/bin:/bin"}
        res = subprocess.run([sys.executable, "-m", "covgame.cli", "region", "--grid-levels", "5", "--out", str(out)],
                             capture_output=True, text=True, env=env)
        assert res.returncode == 0, res.stderr
        paths.append(out)
    a = np.array([[float(x) for x in r[3:5]] for r in csv.reader(open(paths[0])) if r[0] == "point"])
    b = np.array([[float(x) for x in r[3:5]] for r in csv.reader(open(paths[1])) if r[0] == "point"])
    assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_triangle_file_is_builtin():
    from covgame.scenario_io import load_scenario
    assert load_scenario(SCENARIOS / "triangle.toml") == triangle_scenario()
