import json

import pytest

from tmis_workbench.errors import (
    ConfigError, DecodeError, ParamsMismatch, SchemaVersionMismatch,
)
from tmis_workbench.harness import (
    TRANSCRIPT_FIELDS, EavesdropChannel, LogicalClock, ScenarioConfig,
    export_transcripts, load_registry, replay_attacks, run_all, run_honest,
    run_kssti, run_pfs, run_scenario, run_tamper, save_registry,
)


def cfg(**kw):
    base = dict(param_set="test", seed=1, sessions=10)
    base.update(kw)
    return ScenarioConfig(**base)


def test_clock_strictly_monotone():
    c = LogicalClock(100, 3)
    reads = [c.now() for _ in range(5)]
    assert reads == [103, 106, 109, 112, 115]


def test_channel_records_verbatim():
    ch = EavesdropChannel()
    payload = b"\x01abc"
    assert ch.send("a->b", payload, 7) is payload
    assert ch.recorded[0].payload == payload and ch.recorded[0].at_millis == 7


@pytest.mark.parametrize("bad", [
    dict(sessions=0), dict(scenario="nope"), dict(param_set="huge"),
    dict(seed=-1), dict(seed=2 ** 64), dict(output_format="xml"), dict(delta_max_millis=-1),
])
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        run_scenario(cfg(**bad))


def test_honest():
    rep = run_honest(cfg(sessions=100))
    assert rep.passed
    assert rep.data["summary"]["agreements"] == 100
    for s in rep.data["sessions"]:
        assert s["sk_patient_hex"] == s["sk_server_hex"]


def test_summary_matches_sessions():
    rep = run_all(cfg(param_set="test", sessions=12))
    s = rep.data["summary"]
    assert s["runs"] == len(rep.data["sessions"])
    assert s["agreements"] == sum(x["agreement"] for x in rep.data["sessions"])
    for name in ("kssti", "pfs"):
        assert s["attack_success_counts"][name] == sum(
            a["matches"] for x in rep.data["sessions"] for a in x["attack_results"]
            if a["attack_name"] == name)


def test_stale_surfaces_in_report():
    rep = run_honest(cfg(sessions=1, delta_max_millis=0, clock_step_millis=5))
    assert not rep.passed
    assert rep.data["sessions"][0]["error"] == "StaleTimestamp"
    assert rep.data["summary"]["session_errors"] == {"StaleTimestamp": 1}


def test_zero_window_zero_step_is_fresh():
    assert run_honest(cfg(sessions=2, delta_max_millis=0, clock_step_millis=0)).passed


def test_kssti_and_pfs_scenarios():
    k = run_kssti(cfg(sessions=100))
    assert k.passed and k.data["summary"]["attack_success_counts"] == {"kssti": 100}
    p = run_pfs(cfg(sessions=100))
    assert p.passed and p.data["summary"]["attack_success_counts"] == {"pfs": 100}
    assert all(s["attack_results"][0]["id_matches"] for s in p.data["sessions"])


def test_corrupt_leak_negative_controls():
    k = run_kssti(cfg(sessions=100, corrupt_leak=True))
    assert k.data["summary"]["attack_success_counts"] == {"kssti": 0}
    assert k.passed
    p = run_pfs(cfg(sessions=100, corrupt_leak=True))
    assert p.data["summary"]["attack_success_counts"] == {"pfs": 0}
    assert p.data["summary"]["attack_failures"] == {"pfs": {"DecryptFailure": 100}}


def test_tamper_desk():
    rep = run_tamper(cfg(param_set="desk", sessions=5, tamper_trials=12))
    assert rep.passed
    t = rep.data["summary"]["tamper"]
    assert set(t) == {"R_i", "T_i", "Auth_i", "R_s", "T_s", "Auth_s"}
    assert all(v["trials"] == 12 and v["false_accepts"] == 0 for v in t.values())
    assert set(t["T_i"]["reasons"]) == {"TimestampMismatch"}
    assert set(t["Auth_s"]["reasons"]) == {"AuthMismatch"}


def test_tamper_on_test_curve_exposes_short_auth():
    # Auth_s lives in Z_11 on TEST, so about 1 in 11 forged responses verify
    rep = run_tamper(cfg(sessions=10, tamper_trials=200))
    assert rep.data["summary"]["tamper"]["R_s"]["false_accepts"] > 0
    assert not rep.passed


def test_determinism_json():
    a = run_all(cfg(sessions=5)).to_json()
    b = run_all(cfg(sessions=5)).to_json()
    assert a == b
    assert json.loads(a)["schema"] == "1"


def test_session_values_independent_of_count():
    a = run_honest(cfg(sessions=3)).data["sessions"]
    b = run_honest(cfg(sessions=7)).data["sessions"][:3]
    assert a == b


def test_text_report():
    text = run_all(cfg(sessions=3)).to_text()
    assert "key agreement: 3/3" in text
    assert "attack kssti: recovered SK in 3/3" in text


def test_registry_persistence(tmp_path):
    path = tmp_path / "registry.txt"
    run_honest(cfg(sessions=3, registry_path=str(path)))
    reg = load_registry(path)
    assert len(reg) == 3 and set(reg.values()) == {0}
    run_honest(cfg(sessions=3, registry_path=str(path)))
    assert set(load_registry(path).values()) == {1}
    save_registry(path, {b"\x01": 4})
    assert path.read_text().splitlines()[1] == "01=4"
    path.write_text("zz=1\n")
    with pytest.raises(DecodeError):
        load_registry(path)


# -- export / replay --------------------------------------------------------

def export(tmp_path, **kw):
    t = tmp_path / "t.jsonl"
    rep = export_transcripts(cfg(**kw), t)
    return rep, t, tmp_path / "t.leaks.jsonl"


def test_export_replay_identical(tmp_path):
    rep, t, leaks = export(tmp_path, scenario="all", sessions=8)
    replayed = replay_attacks(t, leaks)
    assert replayed.passed
    orig = [s["attack_results"] for s in rep.data["sessions"]]
    again = [s["attack_results"] for s in replayed.data["sessions"]]
    assert json.dumps(orig, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_transcript_schema_is_public_only(tmp_path):
    _, t, _ = export(tmp_path, scenario="kssti", sessions=2)
    for line in t.read_text().splitlines():
        obj = json.loads(line)
        meta = {"schema", "session_id", "params"}
        assert set(obj) - meta == set(TRANSCRIPT_FIELDS)


def test_replay_truncated(tmp_path):
    _, t, leaks = export(tmp_path, scenario="kssti", sessions=3)
    data = t.read_text()
    t.write_text(data[: len(data) - 40])
    with pytest.raises(DecodeError, match=r"t\.jsonl:3"):
        replay_attacks(t, leaks)


def test_replay_schema_mismatch(tmp_path):
    _, t, leaks = export(tmp_path, scenario="kssti", sessions=1)
    t.write_text(t.read_text().replace('"schema": "1"', '"schema": "2"'))
    with pytest.raises(SchemaVersionMismatch):
        replay_attacks(t, leaks)


def test_replay_params_mismatch(tmp_path):
    _, t, _ = export(tmp_path, scenario="kssti", sessions=2)
    (tmp_path / "d").mkdir()
    _, _, desk_leaks = export(tmp_path / "d", scenario="kssti", sessions=2, param_set="desk")
    with pytest.raises(ParamsMismatch):
        replay_attacks(t, desk_leaks)


def test_replay_missing_file(tmp_path):
    with pytest.raises(OSError):
        replay_attacks(tmp_path / "none.jsonl", tmp_path / "none2.jsonl")
