import json

import pytest

from tmis_workbench.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_run_honest_text(capsys):
    code, out = run(capsys, "run", "--scenario", "honest", "--sessions", "3")
    assert code == 0
    assert "key agreement: 3/3" in out.out and "PASS" in out.out


def test_run_json_schema(capsys):
    code, out = run(capsys, "run", "--scenario", "kssti", "--sessions", "2", "--format", "json")
    assert code == 0
    rep = json.loads(out.out)
    assert rep["schema"] == "1"
    assert rep["config"]["scenario"] == "kssti"


def test_exit_code_on_failed_assertion(capsys):
    code, out = run(capsys, "run", "--sessions", "1", "--delta-max", "0")
    assert code == 1 and "FAIL" in out.out


def test_corrupt_leak_control_passes(capsys):
    code, out = run(capsys, "run", "--scenario", "pfs", "--sessions", "5", "--corrupt-leak")
    assert code == 0
    assert "failed (DecryptFailure): 5" in out.out


def test_export_and_replay(capsys, tmp_path):
    t = tmp_path / "t.jsonl"
    code, _ = run(capsys, "run", "--scenario", "all", "--params", "desk", "--sessions", "3",
                  "--tamper-trials", "6", "--export", str(t))
    assert code == 0
    code, out = run(capsys, "replay", "--transcripts", str(t),
                    "--leaks", str(tmp_path / "t.leaks.jsonl"), "--format", "json")
    assert code == 0
    assert json.loads(out.out)["summary"]["attack_success_counts"] == {"kssti": 3, "pfs": 3}


def test_errors_exit_2(capsys, tmp_path):
    code, out = run(capsys, "replay", "--transcripts", str(tmp_path / "x"), "--leaks", "y")
    assert code == 2 and "workbench:" in out.err
    code, out = run(capsys, "run", "--sessions", "0")
    assert code == 2 and "ConfigError" in out.err


def test_bad_choice():
    with pytest.raises(SystemExit):
        main(["run", "--scenario", "bogus"])
