import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from paratower.ring import monomial_str
from paratower.scenario import (
    ScenarioError,
    load_scenario_text,
    parse_monomial,
    parse_rational,
    render_report,
)

F = Fraction
DATA = Path(__file__).parent / "data"


def _run(*argv, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "paratower", *argv],
        capture_output=True,
        text=True,
        input=stdin,
    )


def test_parse_rational_forms():
    assert parse_rational("3/4", "x") == F(3, 4)
    assert parse_rational("-2", "x") == F(-2)
    assert parse_rational(5, "x") == F(5)
    with pytest.raises(ScenarioError):
        parse_rational(0.5, "x")
    with pytest.raises(ScenarioError):
        parse_rational("3//4", "x")
    with pytest.raises(ScenarioError):
        parse_rational(True, "x")


def test_scenario_round_trip():
    sf = load_scenario_text((DATA / "curve.json").read_text())
    assert sf.shape.base.dim == 1
    assert sf.shape.ranks == (1,)
    assert sf.bundle.rank == 2
    assert sf.weights.lambdas == ((F(1, 2),),)
    assert sf.omega == (F(1), F(0))
    assert len(sf.subobjects) == 2
    assert sf.options["epsilon"] == F(1, 10)


def test_scenario_float_rejected():
    text = json.dumps(
        {
            "base": {"dim": 1, "divisors": ["D1"], "table": {"w": 0.5, "D1": "1"}},
            "tower": {"ranks": [1]},
        }
    )
    with pytest.raises(ScenarioError) as err:
        load_scenario_text(text)
    assert "table" in str(err.value)


def test_scenario_error_paths_are_precise():
    bad = json.loads((DATA / "curve.json").read_text())
    bad["bundle"]["filtrations"] = [[1, 2]]
    with pytest.raises(ScenarioError) as err:
        load_scenario_text(json.dumps(bad))
    assert err.value.path == "bundle.filtrations"

    bad = json.loads((DATA / "curve.json").read_text())
    bad["weights"]["lambdas"] = [["2"]]
    with pytest.raises(ScenarioError) as err:
        load_scenario_text(json.dumps(bad))
    assert "weights" in err.value.path


def test_scenario_rank_cap():
    obj = json.loads((DATA / "curve.json").read_text())
    obj["tower"]["ranks"] = [9]
    with pytest.raises(ScenarioError):
        load_scenario_text(json.dumps(obj), max_rank=8)


def test_parse_monomial_round_trip():
    sf = load_scenario_text((DATA / "p2_line.json").read_text())
    mono = parse_monomial(sf.shape, "w^2 d1 t2^3 L")
    assert monomial_str(sf.shape, mono) == "w^2 L d1 t2^3"
    assert parse_monomial(sf.shape, "1").degree() == 0
    with pytest.raises(ScenarioError):
        parse_monomial(sf.shape, "d3")
    with pytest.raises(ScenarioError):
        parse_monomial(sf.shape, "q^2")


def test_parse_monomial_needs_component_on_multidivisor_towers():
    text = json.dumps(
        {
            "base": {
                "dim": 1,
                "divisors": ["D1", "D2"],
                "table": {"w": "1", "D1": "1", "D2": "1"},
            },
            "tower": {"ranks": [1, 1]},
        }
    )
    sf = load_scenario_text(text)
    assert parse_monomial(sf.shape, "d1.1 t2.1").degree() == 2
    with pytest.raises(ScenarioError):
        parse_monomial(sf.shape, "d1")


def test_render_report_rejects_floats():
    with pytest.raises(ValueError):
        render_report({"a": [1, {"b": 2.5}]})


def test_cli_pair_value_and_trace():
    out = _run("pair", str(DATA / "curve.json"), "t1^2", "--trace")
    assert out.returncode == 0
    report = json.loads(out.stdout)
    assert report["results"]["value"] == "-1"
    assert any("descent" in line for line in report["results"]["trace"])


def test_cli_pair_two_level_fiber_classes(tmp_path):
    obj = json.loads((DATA / "curve.json").read_text())
    obj["tower"]["ranks"] = [2]
    obj["bundle"]["filtrations"] = [[1, 1]]
    obj["weights"]["lambdas"] = [["1/2", "1/4"]]
    for sub in obj["subobjects"]:
        sub["filtrations"] = [[0, 0]]
    path = tmp_path / "r2.json"
    path.write_text(json.dumps(obj))
    out = _run("pair", str(path), "w d1 d2")
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["value"] == "1"
    out = _run("pair", str(path), "d1^2")
    assert json.loads(out.stdout)["results"]["value"] == "0"


def test_cli_reads_stdin():
    text = (DATA / "curve.json").read_text()
    out = _run("pair", "-", "t1^2", stdin=text)
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["value"] == "-1"


def test_cli_slope_report():
    out = _run("slope", str(DATA / "p2_line.json"))
    assert out.returncode == 0
    results = json.loads(out.stdout)["results"]
    assert results["ok"] is True
    assert results["sigma"] == 3
    assert results["par_slope"] == "2"


def test_cli_cone_threshold():
    out = _run("cone", str(DATA / "p2_line.json"))
    assert out.returncode == 0
    entry = json.loads(out.stdout)["results"]["components"]["1"]
    lo, hi = F(entry["sup_lo"]), F(entry["sup_hi"])
    assert lo <= 1 <= hi and hi - lo <= F(1, 1000)


def test_cli_stability_report():
    out = _run("stability", str(DATA / "curve.json"))
    assert out.returncode == 0
    results = json.loads(out.stdout)["results"]
    assert results["parabolic"]["verdict"] == "stable"
    assert results["theorem_check"]["ok"] is True
    assert results["at_epsilon"]["epsilon"] == "1/10"


def test_cli_weights_report():
    out = _run("weights", str(DATA / "p2_line.json"))
    assert out.returncode == 0
    results = json.loads(out.stdout)["results"]
    assert results["ok"] is True
    assert results["c1_upstairs"] == {"w": "3", "t1": "1", "t2": "2"}


def test_cli_determinism_and_exactness():
    first = _run("stability", str(DATA / "curve.json"))
    second = _run("stability", str(DATA / "curve.json"))
    assert first.stdout == second.stdout

    def no_floats(obj):
        if isinstance(obj, float):
            return False
        if isinstance(obj, dict):
            return all(no_floats(v) for v in obj.values())
        if isinstance(obj, list):
            return all(no_floats(v) for v in obj)
        return True

    assert no_floats(json.loads(first.stdout, parse_float=float))


def test_cli_multiple_files_ordered_with_jobs():
    args = ["slope", str(DATA / "p2_line.json"), str(DATA / "p2_line.json")]
    seq = _run(*args)
    par = _run(*args, "--jobs", "4")
    assert seq.returncode == 0
    assert seq.stdout == par.stdout
    reports = json.loads(seq.stdout)["reports"]
    assert len(reports) == 2


def test_cli_input_errors_exit_2(tmp_path):
    missing = tmp_path / "nope.json"
    out = _run("slope", str(missing))
    assert out.returncode == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = _run("slope", str(bad))
    assert out.returncode == 2
    assert "input error" in out.stderr

    obj = json.loads((DATA / "curve.json").read_text())
    del obj["bundle"]
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps(obj))
    out = _run("slope", str(incomplete))
    assert out.returncode == 2
    assert "bundle" in out.stderr


def test_cli_table_gap_exit_2(tmp_path):
    obj = json.loads((DATA / "curve.json").read_text())
    del obj["base"]["table"]["D1"]
    path = tmp_path / "gap.json"
    path.write_text(json.dumps(obj))
    out = _run("pair", str(path), "t1^2")
    assert out.returncode == 2
    assert "no table entry" in out.stderr


def test_cli_epsilon_override():
    out = _run("stability", str(DATA / "curve.json"), "--epsilon", "1/7")
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["at_epsilon"]["epsilon"] == "1/7"


def test_cli_max_rank_env(tmp_path):
    obj = json.loads((DATA / "curve.json").read_text())
    obj["tower"]["ranks"] = [3]
    obj["bundle"]["filtrations"] = [[1, 1, 2]]
    obj["weights"]["lambdas"] = [["1/2", "1/4", "1/8"]]
    path = tmp_path / "deep.json"
    path.write_text(json.dumps(obj))
    import os

    env = dict(os.environ, PARATOWER_MAX_RANK="2")
    out = subprocess.run(
        [sys.executable, "-m", "paratower", "pair", str(path), "w"],
        capture_output=True, text=True, env=env,
    )
    assert out.returncode == 2
    assert "cap" in out.stderr


def test_cli_generated_subobjects(tmp_path):
    obj = json.loads((DATA / "curve.json").read_text())
    obj["subobjects"] = []
    obj["options"]["generate_curve_subobjects"] = True
    path = tmp_path / "gen.json"
    path.write_text(json.dumps(obj))
    out = _run("stability", str(path))
    assert out.returncode == 0
    results = json.loads(out.stdout)["results"]
    assert len(results["subobjects"]) > 0
    assert results["theorem_check"]["ok"] is True
