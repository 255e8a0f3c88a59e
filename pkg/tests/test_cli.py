from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from qsatake.cli import main, render_diagram
from qsatake.rootdata import build_root_system
from qsatake.satake import make_diagram

SMALL_CONFIG = "checks = ybe, re, satake\nmax_dim = 3\nsamples = 1\n"


@pytest.fixture
def runner():
    return CliRunner()


def _reports(text: str) -> list[dict]:
    return json.loads(text)


def test_render_examples():
    assert render_diagram(make_diagram(build_root_system("GL", 1, 1), [], (2, 1))) == "[o]-[o] tau:(1 2)"
    assert render_diagram(make_diagram(build_root_system("OSP-odd", 1, 1), [2])) == "[o] => *"
    assert render_diagram(make_diagram(build_root_system("SPO", 1, 1), [2])) == "[o] <= *"
    assert render_diagram(make_diagram(build_root_system("OSP-even", 1, 2), [1], (1, 3, 2))) == "*-<([o],[o]) tau:(2 3)"


def test_verify_ybe_passes(runner):
    res = runner.invoke(main, ["verify", "ybe", "--family", "OSP-odd", "--bn", "0", "--bm", "1"])
    assert res.exit_code == 0
    (r,) = _reports(res.output)
    assert r["status"] == "PASS" and r["check"] == "ybe"


def test_verify_relations_failure_exits_2(runner):
    res = runner.invoke(main, ["verify", "relations", "--family", "OSP-odd", "--bn", "1", "--bm", "1"])
    assert res.exit_code == 2
    assert _reports(res.output)[0]["status"] == "FAIL"


def test_violated_params_exit_3(runner, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"lambda": "1", "1": "1", "3": "q"}))
    res = runner.invoke(main, ["verify", "re", "--family", "OSP-odd", "--bn", "0", "--bm", "1",
                               "--kind", "A", "--block", "1", "--params", str(p)])
    assert res.exit_code == 3
    assert _reports(res.output)[0]["status"] == "PRECONDITION-FAIL"


def test_conjecture_strictness(runner):
    args = ["verify", "re", "--family", "GL", "--bn", "2", "--bm", "1", "--kind", "GL-LEFT"]
    res = runner.invoke(main, args)
    assert res.exit_code == 0
    assert _reports(res.output)[0]["status"].startswith("CONJECTURE")


def test_enumerate_ascii_and_json(runner):
    args = ["enumerate", "satake", "--family", "GL", "--bn", "1", "--bm", "1"]
    res = runner.invoke(main, args + ["--format", "ascii"])
    assert res.exit_code == 0 and res.output.strip() == "[o]-[o] tau:(1 2)  [I/GL-I]"
    res = runner.invoke(main, args + ["--format", "json"])
    (entry,) = json.loads(res.output)
    assert entry["family"] == "GL-I" and entry["tau"] == [[1, 2]]


def test_solve_mixture_example(runner, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"lambda": "1", "1": "1", "3": "-q"}))
    res = runner.invoke(main, ["solve", "mixture", "--family", "OSP-odd", "--bn", "0", "--bm", "1",
                               "--kind", "A", "--block", "1", "--params", str(p)])
    assert res.exit_code == 0
    (row,) = json.loads(res.output)
    assert row["c"] == "(-1)/(q)" and row["matches_paper"] is True


def test_check_spherical(runner):
    res = runner.invoke(main, ["check", "spherical", "--family", "GL", "--bn", "1", "--bm", "1", "--piL", "", "--tau", "2,1"])
    assert res.exit_code == 0
    assert "dim k = 4" in _reports(res.output)[0]["notes"]


def test_dump_rootdata(runner):
    res = runner.invoke(main, ["dump", "rootdata", "--family", "GL", "--bn", "1", "--bm", "1"])
    assert res.exit_code == 0
    assert json.loads(res.output)["simple_roots_text"] == ["δ1-ε1", "-δ2+ε1"]


def test_config_error_names_line_and_field(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("checks = re\nparams.OSP-odd.0.1.A.1 = lambda: 1; 3: (q + 1\n")
    res = runner.invoke(main, ["run", "--config", str(cfg)])
    assert res.exit_code == 4
    assert f"{cfg}:2" in res.output and "'3'" in res.output


def test_unknown_check_is_config_error(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("checks = nope\n")
    res = runner.invoke(main, ["run", "--config", str(cfg)])
    assert res.exit_code == 4 and "unknown checks" in res.output


def test_golden_round_trip_and_drift(runner, tmp_path):
    cfg = tmp_path / "small.cfg"
    gold = tmp_path / "golden.json"
    cfg.write_text(SMALL_CONFIG + f"golden = {gold}\n")
    res = runner.invoke(main, ["golden", "bless", "--config", str(cfg)])
    assert res.exit_code == 0 and gold.exists()
    res = runner.invoke(main, ["golden", "diff", "--config", str(cfg)])
    assert res.exit_code == 0
    data = json.loads(gold.read_text())
    data[0]["status"] = "FAIL"
    gold.write_text(json.dumps(data, indent=1, sort_keys=True, ensure_ascii=False) + "\n")
    res = runner.invoke(main, ["golden", "diff", "--config", str(cfg)])
    assert res.exit_code == 1 and "report 0 drifted" in res.output
    res = runner.invoke(main, ["golden", "diff", "--config", str(cfg), "--bless"])
    assert res.exit_code == 0
    assert runner.invoke(main, ["golden", "diff", "--config", str(cfg)]).exit_code == 0


def test_golden_missing_file_is_drift(runner, tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(SMALL_CONFIG)
    res = runner.invoke(main, ["golden", "diff", "--config", str(cfg), "--golden", str(tmp_path / "none.json")])
    assert res.exit_code == 1


def test_run_writes_output(runner, tmp_path):
    cfg = tmp_path / "small.cfg"
    out = tmp_path / "out.json"
    cfg.write_text(SMALL_CONFIG)
    res = runner.invoke(main, ["run", "--config", str(cfg), "--output", str(out)])
    assert res.exit_code == 0
    assert all(r["status"] in ("PASS", "CONJECTURE-PASS") for r in json.loads(out.read_text()))


def test_shipped_golden_matches(runner, monkeypatch):
    from pathlib import Path

    monkeypatch.chdir(Path(__file__).resolve().parents[1])
    res = runner.invoke(main, ["golden", "diff", "--config", "configs/default.cfg"])
    assert res.exit_code == 0, res.output


def test_kind_is_case_insensitive(runner):
    res = runner.invoke(main, ["verify", "re", "--family", "GL", "--bn", "2", "--bm", "1", "--kind", "a-gl", "--block", "1"])
    assert res.exit_code == 0
    assert _reports(res.output)[0]["instance"]["kind"] == "A-GL"
