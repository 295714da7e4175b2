import json
import subprocess
import sys
from pathlib import Path

import pytest

from darbouxmono.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
GOLDEN = Path(__file__).resolve().parent / "golden"


def test_full_run_text(capsys):
    assert main(["full", str(PROBLEMS / "two-monomials-generic.toml")]) == 0
    out = capsys.readouterr().out
    assert "transversal to: {z=0}" in out
    assert "derived matches solver: True" in out


def test_machine_output_matches_golden(tmp_path):
    target = tmp_path / "r.json"
    assert main(["full", str(PROBLEMS / "three-lines-unit.toml"), "--machine", "--output", str(target)]) == 0
    assert target.read_text() == (GOLDEN / "three-lines-unit.json").read_text()


def test_resonant_exits_zero(capsys):
    assert main(["full", str(PROBLEMS / "two-monomials-resonant.toml"), "--machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["leaves"][0]["elimination"]["status"].startswith("nongeneric")


def test_verify_report_round_trip(tmp_path, capsys):
    target = tmp_path / "r.json"
    main(["full", str(PROBLEMS / "three-monomials.toml"), "--machine", "--output", str(target)])
    assert main(["verify-report", str(target)]) == 0
    assert "0 failed" in capsys.readouterr().out
    report = json.loads(target.read_text())
    report["leaves"][0]["system"]["units"][0] = "1 + 2*x"
    target.write_text(json.dumps(report))
    assert main(["verify-report", str(target)]) == 1


def test_script_and_strategy_flags(tmp_path, capsys):
    script = tmp_path / "steps.txt"
    script.write_text("root x,y,eps x=u,y=v\nroot/0:eps u,v\n")
    problem = str(PROBLEMS / "three-lines-unit.toml")
    assert main(["monomialize", problem, "--script", str(script), "--machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    status = {leaf["chart"]: leaf["status"] for leaf in report["leaves"]}
    assert status["root/0:y"] == "manual script exhausted"
    assert main(["monomialize", problem, "--strategy", "auto-origin", "--max-depth", "2", "--machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert any("max_depth 2" in leaf["status"] for leaf in report["leaves"])


def test_jet_order_flag(capsys):
    assert main(["full", str(PROBLEMS / "two-monomials-generic.toml"), "--jet-order", "3", "--machine"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["jet_order"] == 3
    assert report["leaves"][0]["elimination"]["factors"]["y"] == "-z^3 + z^2 - z + 1"


def test_nc_point_flag(capsys):
    args = ["monomialize", str(PROBLEMS / "three-lines-unit.toml"), "--machine", "--nc-point", "root/0:eps@u=1,v=1"]
    assert main(args) == 0
    report = json.loads(capsys.readouterr().out)
    chart = next(c for c in report["monomialize"]["charts"] if c["id"] == "root/0:eps")
    assert chart["nc_points"] == [{"at": {"u": "1", "v": "1"}, "factors_ok": [True, False, True]}]


def test_input_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('[problem]\nvariables = ["x", "y"]\n[[factor]]\npoly = "x y"\n')
    assert main(["full", str(bad)]) == 2
    assert "position" in capsys.readouterr().err
    assert main(["full", str(tmp_path / "missing.toml")]) == 2
    with pytest.raises(SystemExit):
        main(["full", str(bad), "--nc-point", "nonsense"])


def test_verification_failure_exits_one(tmp_path, monkeypatch):
    import darbouxmono.cli as cli

    def failing(problem, command, **kwargs):
        return {"summary": {"verification_failed": True}, "format": "", "problem": "", "command": command,
                "jet_order": 1, "input": {}}

    monkeypatch.setattr(cli, "run", failing)
    monkeypatch.setattr(cli, "render_text", lambda r: "failed\n")
    assert main(["full", str(PROBLEMS / "curve-cusp.toml")]) == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "darbouxmono", "foliation", str(PROBLEMS / "three-lines-unit.toml")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "integrating factor check: passed" in proc.stdout
