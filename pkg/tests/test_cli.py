import json
import sys
import textwrap

import pytest

from loopwitness.cli import main

from conftest import GOLDEN_SOURCES


@pytest.fixture
def loops_dir(tmp_path):
    for name, src in GOLDEN_SOURCES.items():
        (tmp_path / f"{name.lower()}.loop").write_text(src + "\n")
    return tmp_path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_exit_codes(loops_dir, capsys):
    code, out, _ = run_cli(capsys, "analyze", str(loops_dir / "l1.loop"),
                           "--no-smt")
    assert code == 0
    assert "non_terminating" in out
    code, out, _ = run_cli(capsys, "analyze", str(loops_dir / "l2.loop"),
                           "--no-smt")
    assert code == 1
    assert "terminating" in out
    code, out, _ = run_cli(capsys, "analyze", str(loops_dir / "l5.loop"),
                           "--no-smt")
    assert code == 2
    assert "unknown" in out


def test_analyze_emits_reverifiable_certificate(loops_dir, tmp_path, capsys):
    code, out, _ = run_cli(capsys, "analyze", str(loops_dir / "l1.loop"),
                           "--no-smt", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schemaVersion"] == 1
    cert = tmp_path / "l1.cert.json"
    cert.write_text(json.dumps(payload["certificate"]))
    code, out, _ = run_cli(capsys, "verify", str(loops_dir / "l1.loop"),
                           str(cert))
    assert code == 0 and "verified" in out
    # the same certificate must not verify against a different loop
    code, _, err = run_cli(capsys, "verify", str(loops_dir / "l2.loop"),
                           str(cert))
    assert code == 1 and "different loop" in err


def test_parse_failure_exit_64(tmp_path, capsys):
    bad = tmp_path / "bad.loop"
    bad.write_text("loop(x) { guard: x > 0; step: x' == x; }")
    code, _, err = run_cli(capsys, "analyze", str(bad))
    assert code == 64
    assert "strict" in err


def test_missing_solver_with_heuristics_disabled_exit_69(loops_dir, capsys,
                                                         monkeypatch):
    monkeypatch.setenv("PATH", "/definitely/not/here")
    code, _, err = run_cli(capsys, "analyze", str(loops_dir / "l5.loop"),
                           "--no-heuristics")
    assert code == 69
    assert "no solver" in err


def test_simulate_json(loops_dir, capsys):
    code, out, _ = run_cli(capsys, "simulate", str(loops_dir / "l2.loop"),
                           "--start", "5", "--steps", "10")
    assert code == 0
    payload = json.loads(out)
    assert payload["points"] == [["5"], ["4"], ["3"], ["2"], ["1"], ["0"],
                                 ["-1"]]
    assert all(payload["stepMembership"])


def test_simulate_bad_start(loops_dir, capsys):
    code, _, err = run_cli(capsys, "simulate", str(loops_dir / "l4.loop"),
                           "--start", "1", "--steps", "3")
    assert code == 64
    assert "comma-separated" in err


def test_encode_prints_script(loops_dir, capsys):
    code, out, _ = run_cli(capsys, "encode", str(loops_dir / "l5.loop"))
    assert code == 0
    assert out.startswith("(set-option :produce-models true)")
    assert "(check-sat)" in out and "declare-const m22" in out


def test_json_output_is_deterministic(loops_dir, capsys):
    a = run_cli(capsys, "analyze", str(loops_dir / "l3.loop"), "--no-smt",
                "--format", "json", "--seed", "7")
    b = run_cli(capsys, "analyze", str(loops_dir / "l3.loop"), "--no-smt",
                "--format", "json", "--seed", "7")
    assert a == b


def test_config_precedence(loops_dir, tmp_path, capsys, monkeypatch):
    # config file says 3 steps; env overrides to 4; flag overrides to 5
    cfg = tmp_path / "lw.cfg"
    cfg.write_text("steps = 3\n# comment line\nformat = json\n")
    code, out, _ = run_cli(capsys, "simulate", str(loops_dir / "l1.loop"),
                           "--start", "0", "--config", str(cfg))
    assert len(json.loads(out)["points"]) == 4  # 3 steps -> 4 points
    monkeypatch.setenv("LOOPWITNESS_STEPS", "4")
    code, out, _ = run_cli(capsys, "simulate", str(loops_dir / "l1.loop"),
                           "--start", "0", "--config", str(cfg))
    assert len(json.loads(out)["points"]) == 5
    code, out, _ = run_cli(capsys, "simulate", str(loops_dir / "l1.loop"),
                           "--start", "0", "--config", str(cfg),
                           "--steps", "5")
    assert len(json.loads(out)["points"]) == 6


def test_config_file_rejects_unknown_keys(loops_dir, tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("tempo = 99\n")
    code, _, err = run_cli(capsys, "analyze", str(loops_dir / "l1.loop"),
                           "--config", str(cfg))
    assert code == 64
    assert "unknown key" in err


def test_analyze_with_stub_solver(loops_dir, tmp_path, capsys):
    stub = tmp_path / "solver.py"
    stub.write_text(textwrap.dedent(
        "import sys\nsys.stdin.read()\nprint('unsat')\n"))
    code, out, _ = run_cli(capsys, "analyze", str(loops_dir / "l5.loop"),
                           "--solver", f"{sys.executable} {stub}")
    assert code == 1
    assert "terminating" in out
