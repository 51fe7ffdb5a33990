"""Deterministic scenario runner.

A run registers one patient per session against a single server, drives the
handshake over an :class:`EavesdropChannel` with a :class:`LogicalClock`, and
then, depending on the scenario, hands the recorded transcript plus a leaked
secret to the attacks or replays tampered copies of each message.  The only
entropy is the configured seed: the server key comes from ``fork(seed,
"server")`` and session ``i`` draws from ``fork(seed, "session:i")``, so a
session's values do not depend on how many sessions run.

Leak oracles (:func:`leak_ephemeral`, :func:`leak_long_term`) are the only
code that reads role internals on behalf of an adversary.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .algebra import CurveParams, deserialize_g1, g1_scalar_mul, serialize_g1
from .attacks import (
    AttackOutcome, LeakedEphemeral, LeakedLongTerm, Transcript, kssti_attack, pfs_attack,
)
from .errors import (
    ConfigError, DecodeError, ParamsMismatch, SchemaVersionMismatch, WorkbenchError,
)
from .params import PARAM_SETS, by_label
from .primitives import DIGEST_LEN, Ciphertext, FreshnessPolicy
from .protocol import (
    LoginRequest, PatientCredentials, ServerResponse, patient_finish,
    patient_login_start, patient_make_registration, register_patient,
    server_handle_login, server_keygen,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
SERVER_ID = b"TMIS-server"
EPOCH_MILLIS = 1_600_000_000_000
SESSION_SPACING_MILLIS = 60_000
SCENARIOS = ("honest", "kssti", "pfs", "tamper", "all")
TAMPER_FIELDS = ("R_i", "T_i", "Auth_i", "R_s", "T_s", "Auth_s")
TRANSCRIPT_FIELDS = ("R_i", "T_i", "Auth_i", "R_s", "T_s", "Auth_s")

U_TO_S = "patient->server"
S_TO_U = "server->patient"


@dataclass
class ScenarioConfig:
    scenario: str = "honest"
    param_set: str = "test"
    seed: int = 0
    sessions: int = 1
    delta_max_millis: int = 1000
    clock_step_millis: int = 5
    output_format: str = "json"
    registry_path: Optional[str] = None
    corrupt_leak: bool = False
    # total tampers per message field, spread over the sessions
    tamper_trials: int = 50

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.param_set not in PARAM_SETS:
            raise ConfigError(f"unknown parameter set {self.param_set!r}")
        if self.sessions < 1:
            raise ConfigError("sessions must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")
        if self.delta_max_millis < 0 or self.clock_step_millis < 0:
            raise ConfigError("delta_max and clock step must be non-negative")
        if self.output_format not in ("text", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.tamper_trials < 0:
            raise ConfigError("tamper_trials must be non-negative")

    @property
    def params(self) -> CurveParams:
        return by_label(self.param_set)

    def echo(self) -> dict:
        return dataclasses.asdict(self)


class LogicalClock:
    """Millisecond counter; every read advances it by ``step`` first."""

    def __init__(self, start: int, step: int = 1):
        self.now_millis = start
        self.step = step

    def now(self) -> int:
        self.now_millis += self.step
        return self.now_millis


@dataclass(frozen=True)
class ChannelRecord:
    direction: str
    at_millis: int
    payload: bytes


@dataclass
class EavesdropChannel:
    recorded: list = field(default_factory=list)

    def send(self, direction: str, payload: bytes, at_millis: int) -> bytes:
        self.recorded.append(ChannelRecord(direction, at_millis, bytes(payload)))
        return payload

    def transcript(self, params: CurveParams) -> Transcript:
        """Rebuild the public transcript from the recorded wire bytes alone."""
        by_dir = {r.direction: r.payload for r in self.recorded}
        req = LoginRequest.from_bytes(by_dir[U_TO_S], params)
        resp = ServerResponse.from_bytes(by_dir[S_TO_U], params)
        return Transcript(req.R_i, req.T_i, req.Auth_i, resp.R_s, resp.T_s, resp.Auth_s,
                          params.security_label)


def fork(seed: int, label: str) -> random.Random:
    d = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return random.Random(int.from_bytes(d, "big"))


# ---------------------------------------------------------------------------
# Leak oracles
# ---------------------------------------------------------------------------

def _wrong(value: int, index: int, q: int, nonzero: bool) -> int:
    # walks through every wrong residue as the session index grows
    span = q - 2 if nonzero else q - 1
    w = (value + 1 + index % span) % q
    if nonzero and w == 0:
        w = (value - 1) % q
    return w


def leak_ephemeral(sstate, params: CurveParams, corrupt: bool = False,
                   index: int = 0) -> LeakedEphemeral:
    r_s = sstate.r_s
    if corrupt:
        r_s = _wrong(r_s, index, params.q, nonzero=False)
    return LeakedEphemeral(r_s)


def leak_long_term(server, corrupt: bool = False, index: int = 0) -> LeakedLongTerm:
    s = server.s
    if corrupt:
        s = _wrong(s, index, server.params.q, nonzero=True)
    return LeakedLongTerm.from_secret(s, server.params)


# ---------------------------------------------------------------------------
# One session
# ---------------------------------------------------------------------------

@dataclass
class SessionRun:
    index: int
    creds: PatientCredentials
    channel: EavesdropChannel
    pstate: object = None
    sstate: object = None
    sk_patient: Optional[bytes] = None
    sk_server: Optional[bytes] = None
    error: Optional[str] = None
    transcript: Optional[Transcript] = None

    @property
    def agreement(self) -> bool:
        return self.sk_patient is not None and self.sk_patient == self.sk_server


def _credentials(rng: random.Random) -> PatientCredentials:
    return PatientCredentials(
        ID_i=b"patient-" + rng.randbytes(6).hex().encode(),
        PW_i=rng.randbytes(12),
        B_i=rng.randbytes(32),
    )


def _session_clock(cfg: ScenarioConfig, index: int) -> LogicalClock:
    return LogicalClock(EPOCH_MILLIS + index * SESSION_SPACING_MILLIS, cfg.clock_step_millis)


def run_session(cfg: ScenarioConfig, server, index: int) -> SessionRun:
    params = server.params
    rng = fork(cfg.seed, f"session:{index}")
    creds = _credentials(rng)
    card = register_patient(server, patient_make_registration(creds))
    run = SessionRun(index, creds, EavesdropChannel())
    clock = _session_clock(cfg, index)
    try:
        run.pstate, req = patient_login_start(card, creds, server.ID_s, clock, rng)
        wire = run.channel.send(U_TO_S, req.to_bytes(), req.T_i)
        run.sstate, resp = server_handle_login(server, LoginRequest.from_bytes(wire, params),
                                               clock, rng)
        run.sk_server = run.sstate.SK_s
        wire = run.channel.send(S_TO_U, resp.to_bytes(), resp.T_s)
        run.sk_patient = patient_finish(run.pstate, ServerResponse.from_bytes(wire, params),
                                        clock, server.policy)
    except WorkbenchError as e:
        run.error = e.reason
        log.info("session %d aborted: %s", index, e)
    if run.sk_server is not None:
        run.transcript = run.channel.transcript(params)
    return run


# ---------------------------------------------------------------------------
# Attacks
# ---------------------------------------------------------------------------

def attack_result(name: str, outcome, expected: dict) -> dict:
    """Report entry for one attack; ``outcome`` is an AttackOutcome or the
    WorkbenchError it raised.  ``expected`` holds hex ground truth."""
    if isinstance(outcome, AttackOutcome):
        rec = {
            "attack_name": name,
            "recovered_sk_hex": outcome.recovered_sk.hex(),
            "matches": outcome.recovered_sk.hex() == expected["sk"],
            "error": None,
            "shared_point_hex": serialize_g1(outcome.shared_point).hex(),
            "trace": [list(step) for step in outcome.trace],
        }
        if name == "pfs":
            rec["recovered_id_hex"] = outcome.recovered_id.hex()
            rec["recovered_r_i_hex"] = format(outcome.recovered_r_i, "x")
            rec["id_matches"] = rec["recovered_id_hex"] == expected["ID_i"]
            rec["r_i_matches"] = rec["recovered_r_i_hex"] == expected["r_i"]
            rec["matches"] = rec["matches"] and rec["id_matches"] and rec["r_i_matches"]
        return rec
    return {
        "attack_name": name,
        "recovered_sk_hex": None,
        "matches": False,
        "error": outcome.reason,
        "shared_point_hex": None,
        "trace": [],
    }


def _run_attack(fn, transcript, leak, params):
    try:
        return fn(transcript, leak, params)
    except WorkbenchError as e:
        return e


def _expected(run: SessionRun) -> dict:
    return {
        "sk": run.sk_server.hex(),
        "ID_i": run.creds.ID_i.hex(),
        "r_i": format(run.pstate.r_i, "x"),
    }


# ---------------------------------------------------------------------------
# Tampering
# ---------------------------------------------------------------------------

def _other_point(pt, rng, params):
    while True:
        k = rng.randrange(0, params.q)
        if k != 1:
            return g1_scalar_mul(k, pt)


def _flip_bit(data: bytes, rng) -> bytes:
    buf = bytearray(data)
    bit = rng.randrange(len(buf) * 8)
    buf[bit // 8] ^= 1 << (bit % 8)
    return bytes(buf)


def _older(t: int, rng, cfg: ScenarioConfig) -> tuple[int, bool]:
    """Earlier timestamp; the flag says whether it is still inside the window."""
    room = cfg.delta_max_millis - cfg.clock_step_millis
    if room >= 1:
        return t - rng.randint(1, room), True
    return t - rng.randint(1, 1000), False


def _tamper_once(fld: str, run: SessionRun, server, cfg: ScenarioConfig, rng):
    """Deliver one tampered clone; returns (rejection reason or None, expected reasons)."""
    params = server.params
    records = {r.direction: r.payload for r in run.channel.recorded}
    req = LoginRequest.from_bytes(records[U_TO_S], params)
    resp = ServerResponse.from_bytes(records[S_TO_U], params)
    expected = {"R_i": {"DecryptFailure", "PointCheckFailed"}, "T_i": {"TimestampMismatch"},
                "Auth_i": {"DecryptFailure"}}.get(fld, {"AuthMismatch"})

    if fld in ("R_i", "T_i", "Auth_i"):
        if fld == "R_i":
            req = dataclasses.replace(req, R_i=_other_point(req.R_i, rng, params))
        elif fld == "T_i":
            t, fresh = _older(req.T_i, rng, cfg)
            req = dataclasses.replace(req, T_i=t)
            if not fresh:
                expected = {"StaleTimestamp"}
        else:
            raw = _flip_bit(req.Auth_i.to_bytes(), rng)
            req = dataclasses.replace(req, Auth_i=Ciphertext.from_bytes(raw))
        # the receiver's clock reads exactly as in the honest delivery
        clock = LogicalClock(run.pstate.T_i, cfg.clock_step_millis)
        try:
            server_handle_login(server, LoginRequest.from_bytes(req.to_bytes(), params),
                                clock, rng)
        except WorkbenchError as e:
            return e.reason, expected
        return None, expected

    if fld == "R_s":
        resp = dataclasses.replace(resp, R_s=_other_point(resp.R_s, rng, params))
    elif fld == "T_s":
        t, fresh = _older(resp.T_s, rng, cfg)
        resp = dataclasses.replace(resp, T_s=t)
        if not fresh:
            expected = {"StaleTimestamp"}
    else:
        raw = _flip_bit(resp.Auth_s.to_bytes(DIGEST_LEN, "big"), rng)
        resp = dataclasses.replace(resp, Auth_s=int.from_bytes(raw, "big"))
    clock = LogicalClock(run.sstate.T_s, cfg.clock_step_millis)
    pstate = dataclasses.replace(run.pstate, L_i=None, SK_i=None)
    try:
        patient_finish(pstate, ServerResponse.from_bytes(resp.to_bytes(), params), clock,
                       server.policy)
    except WorkbenchError as e:
        return e.reason, expected
    return None, expected


def tamper_session(run: SessionRun, server, cfg: ScenarioConfig) -> list:
    rng = fork(cfg.seed, f"tamper:{run.index}")
    out = []
    for fld in TAMPER_FIELDS:
        trials = len(range(run.index, cfg.tamper_trials, cfg.sessions))
        if trials == 0:
            continue
        reasons = Counter()
        false_accepts = unexpected = 0
        for _ in range(trials):
            reason, expected = _tamper_once(fld, run, server, cfg, rng)
            if reason is None:
                false_accepts += 1
            else:
                reasons[reason] += 1
                if reason not in expected:
                    unexpected += 1
        out.append({
            "field": fld,
            "trials": trials,
            "rejected": trials - false_accepts,
            "false_accepts": false_accepts,
            "unexpected_reasons": unexpected,
            "reasons": dict(sorted(reasons.items())),
        })
    return out


# ---------------------------------------------------------------------------
# Registry persistence
# ---------------------------------------------------------------------------

def save_registry(path, registry: dict) -> None:
    lines = ["# patient registry: hex(ID_i)=N\n"]
    lines += [f"{k.hex()}={v}\n" for k, v in sorted(registry.items())]
    Path(path).write_text("".join(lines))


def load_registry(path) -> dict:
    registry = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        try:
            if not sep:
                raise ValueError("missing '='")
            registry[bytes.fromhex(key)] = int(value)
        except ValueError as e:
            raise DecodeError(f"{path}:{lineno}: {e}") from None
    return registry


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class Report:
    data: dict

    @property
    def passed(self) -> bool:
        return self.data["summary"]["passed"]

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        s = self.data["summary"]
        cfg = self.data.get("config", {})
        lines = [f"mode: {self.data['mode']}"]
        if cfg:
            lines.append(f"scenario={cfg['scenario']} params={cfg['param_set']} "
                         f"seed={cfg['seed']} sessions={cfg['sessions']}")
        lines.append(f"runs: {s['runs']}")
        if "agreements" in s:
            lines.append(f"key agreement: {s['agreements']}/{s['runs']}")
        for reason, n in s.get("session_errors", {}).items():
            lines.append(f"  aborted ({reason}): {n}")
        for name, n in s.get("attack_success_counts", {}).items():
            attempts = s["attack_attempts"][name]
            lines.append(f"attack {name}: recovered SK in {n}/{attempts}")
            for reason, m in s["attack_failures"].get(name, {}).items():
                lines.append(f"  failed ({reason}): {m}")
        for fld, t in s.get("tamper", {}).items():
            lines.append(f"tamper {fld}: rejected {t['rejected']}/{t['trials']} "
                         f"false_accepts={t['false_accepts']} reasons={t['reasons']}")
        lines.append("PASS" if s["passed"] else "FAIL")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_text()


def _summarize(sessions: list, attacks: tuple, want_success: bool,
               check_agreement: bool, tamper: bool) -> dict:
    summary = {"runs": len(sessions)}
    passed = True
    if check_agreement:
        summary["agreements"] = sum(1 for s in sessions if s["agreement"])
        summary["session_errors"] = dict(sorted(
            Counter(s["error"] for s in sessions if s["error"]).items()))
        passed &= summary["agreements"] == len(sessions)
    if attacks:
        succ, tries, fails = Counter(), Counter(), {}
        for s in sessions:
            for a in s["attack_results"]:
                tries[a["attack_name"]] += 1
                if a["matches"]:
                    succ[a["attack_name"]] += 1
                elif a["error"]:
                    fails.setdefault(a["attack_name"], Counter())[a["error"]] += 1
        summary["attack_attempts"] = {a: tries[a] for a in attacks}
        summary["attack_success_counts"] = {a: succ[a] for a in attacks}
        summary["attack_failures"] = {k: dict(sorted(v.items())) for k, v in sorted(fails.items())}
        for a in attacks:
            passed &= tries[a] == len(sessions)
            passed &= succ[a] == (tries[a] if want_success else 0)
    if tamper:
        by_field = {}
        for s in sessions:
            for t in s.get("tamper_results", []):
                agg = by_field.setdefault(t["field"], {
                    "trials": 0, "rejected": 0, "false_accepts": 0,
                    "unexpected_reasons": 0, "reasons": Counter()})
                for k in ("trials", "rejected", "false_accepts", "unexpected_reasons"):
                    agg[k] += t[k]
                agg["reasons"].update(t["reasons"])
        for agg in by_field.values():
            agg["reasons"] = dict(sorted(agg["reasons"].items()))
            passed &= agg["false_accepts"] == 0 and agg["unexpected_reasons"] == 0
        summary["tamper"] = {f: by_field[f] for f in TAMPER_FIELDS if f in by_field}
    summary["passed"] = bool(passed)
    return summary


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

_ATTACKS = {"honest": (), "kssti": ("kssti",), "pfs": ("pfs",), "tamper": (),
            "all": ("kssti", "pfs")}


@dataclass
class Artifact:
    """Per-session material for export: public transcript, leaks, ground truth."""

    session_id: int
    transcript: Transcript
    leaks: dict
    expected: dict


def execute(cfg: ScenarioConfig) -> tuple[Report, list]:
    cfg.validate()
    params = cfg.params
    attacks = _ATTACKS[cfg.scenario]
    tamper = cfg.scenario in ("tamper", "all")
    server = server_keygen(params, SERVER_ID, fork(cfg.seed, "server"),
                           FreshnessPolicy(cfg.delta_max_millis))
    if cfg.registry_path and Path(cfg.registry_path).exists():
        server.registry = load_registry(cfg.registry_path)

    sessions, artifacts = [], []
    for index in range(cfg.sessions):
        run = run_session(cfg, server, index)
        rec = {
            "session_id": index,
            "sk_patient_hex": run.sk_patient.hex() if run.sk_patient else None,
            "sk_server_hex": run.sk_server.hex() if run.sk_server else None,
            "agreement": run.agreement,
            "error": run.error,
            "attack_results": [],
        }
        if run.agreement:
            expected = _expected(run)
            leaks = {}
            if "kssti" in attacks or not attacks:
                leaks["r_s"] = leak_ephemeral(run.sstate, params, cfg.corrupt_leak, index)
            if "pfs" in attacks or not attacks:
                leaks["s"] = leak_long_term(server, cfg.corrupt_leak, index)
            for name in attacks:
                fn = kssti_attack if name == "kssti" else pfs_attack
                leak = leaks["r_s" if name == "kssti" else "s"]
                outcome = _run_attack(fn, run.transcript, leak, params)
                rec["attack_results"].append(attack_result(name, outcome, expected))
            if tamper:
                rec["tamper_results"] = tamper_session(run, server, cfg)
            artifacts.append(Artifact(index, run.transcript, leaks, expected))
        elif tamper:
            rec["tamper_results"] = []
        sessions.append(rec)

    if cfg.registry_path:
        save_registry(cfg.registry_path, server.registry)
    summary = _summarize(sessions, attacks, not cfg.corrupt_leak, True, tamper)
    report = Report({"schema": SCHEMA_VERSION, "mode": "run", "config": cfg.echo(),
                     "sessions": sessions, "summary": summary})
    return report, artifacts


def run_scenario(cfg: ScenarioConfig) -> Report:
    return execute(cfg)[0]


def _run_as(cfg: ScenarioConfig, scenario: str) -> Report:
    return run_scenario(dataclasses.replace(cfg, scenario=scenario))


def run_honest(cfg: ScenarioConfig) -> Report:
    return _run_as(cfg, "honest")


def run_kssti(cfg: ScenarioConfig) -> Report:
    return _run_as(cfg, "kssti")


def run_pfs(cfg: ScenarioConfig) -> Report:
    return _run_as(cfg, "pfs")


def run_tamper(cfg: ScenarioConfig) -> Report:
    return _run_as(cfg, "tamper")


def run_all(cfg: ScenarioConfig) -> Report:
    return _run_as(cfg, "all")


# ---------------------------------------------------------------------------
# Export / replay
# ---------------------------------------------------------------------------

def transcript_to_json(session_id: int, t: Transcript) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "session_id": session_id,
        "params": t.params_label,
        "R_i": serialize_g1(t.R_i).hex(),
        "T_i": t.T_i,
        "Auth_i": t.Auth_i.to_bytes().hex(),
        "R_s": serialize_g1(t.R_s).hex(),
        "T_s": t.T_s,
        "Auth_s": t.Auth_s.to_bytes(DIGEST_LEN, "big").hex(),
    }


def transcript_from_json(obj: dict) -> tuple[int, Transcript]:
    params = by_label(obj["params"])
    auth_s = bytes.fromhex(obj["Auth_s"])
    if len(auth_s) != DIGEST_LEN:
        raise DecodeError("Auth_s must be 32 bytes")
    return obj["session_id"], Transcript(
        R_i=deserialize_g1(bytes.fromhex(obj["R_i"]), params),
        T_i=int(obj["T_i"]),
        Auth_i=Ciphertext.from_bytes(bytes.fromhex(obj["Auth_i"])),
        R_s=deserialize_g1(bytes.fromhex(obj["R_s"]), params),
        T_s=int(obj["T_s"]),
        Auth_s=int.from_bytes(auth_s, "big"),
        params_label=obj["params"],
    )


def _leaks_to_json(a: Artifact, label: str) -> dict:
    obj = {"schema": SCHEMA_VERSION, "session_id": a.session_id, "params": label,
           "expected": a.expected}
    if "r_s" in a.leaks:
        obj["r_s"] = format(a.leaks["r_s"].r_s, "x")
    if "s" in a.leaks:
        obj["s"] = format(a.leaks["s"].s, "x")
    return obj


def default_leaks_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".leaks.jsonl")


def export_transcripts(cfg: ScenarioConfig, path, leaks_path=None) -> Report:
    """Run ``cfg`` and write one JSON transcript per line to ``path``; the
    matching leaks and ground truth go to ``leaks_path``."""
    report, artifacts = execute(cfg)
    leaks_path = leaks_path or default_leaks_path(path)
    label = cfg.params.security_label
    with open(path, "w") as f:
        for a in artifacts:
            f.write(json.dumps(transcript_to_json(a.session_id, a.transcript), sort_keys=True) + "\n")
    with open(leaks_path, "w") as f:
        for a in artifacts:
            f.write(json.dumps(_leaks_to_json(a, label), sort_keys=True) + "\n")
    return report


def _read_jsonl(path) -> list:
    out = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DecodeError(f"{path}:{lineno}: {e.msg}") from None
            if not isinstance(obj, dict):
                raise DecodeError(f"{path}:{lineno}: expected a JSON object")
            if obj.get("schema") != SCHEMA_VERSION:
                raise SchemaVersionMismatch(
                    f"{path}:{lineno}: schema {obj.get('schema')!r}, expected {SCHEMA_VERSION!r}")
            out.append((lineno, obj))
    return out


def replay_attacks(path, leaks_path) -> Report:
    """Re-run the attacks offline from exported files."""
    transcripts = {}
    for lineno, obj in _read_jsonl(path):
        try:
            sid, t = transcript_from_json(obj)
        except (KeyError, ValueError, TypeError) as e:
            raise DecodeError(f"{path}:{lineno}: {e}") from None
        transcripts[sid] = t

    sessions, names = [], set()
    for lineno, obj in _read_jsonl(leaks_path):
        try:
            sid = obj["session_id"]
            t = transcripts[sid]
            label = obj["params"]
        except KeyError as e:
            raise DecodeError(f"{leaks_path}:{lineno}: missing {e}") from None
        if label != t.params_label:
            raise ParamsMismatch(
                f"{leaks_path}:{lineno}: leak for {label!r}, transcript for {t.params_label!r}")
        params = by_label(label)
        rec = {"session_id": sid, "attack_results": []}
        if "r_s" in obj:
            out = _run_attack(kssti_attack, t, LeakedEphemeral(int(obj["r_s"], 16)), params)
            rec["attack_results"].append(attack_result("kssti", out, obj["expected"]))
            names.add("kssti")
        if "s" in obj:
            leak = LeakedLongTerm.from_secret(int(obj["s"], 16), params)
            out = _run_attack(pfs_attack, t, leak, params)
            rec["attack_results"].append(attack_result("pfs", out, obj["expected"]))
            names.add("pfs")
        sessions.append(rec)

    attacks = tuple(a for a in ("kssti", "pfs") if a in names)
    summary = _summarize(sessions, attacks, True, False, False)
    return Report({"schema": SCHEMA_VERSION, "mode": "replay", "sessions": sessions,
                   "summary": summary})
