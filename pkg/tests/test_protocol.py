import dataclasses
import random

import pytest

from tmis_workbench.algebra import g1_scalar_mul, gt_pow, pairing
from tmis_workbench.errors import (
    AuthMismatch, CardRejected, DecryptFailure, EmptyIdentity, PointCheckFailed,
    StaleTimestamp, TimestampMismatch,
)
from tmis_workbench.harness import LogicalClock
from tmis_workbench.params import DESK, TEST
from tmis_workbench.primitives import (
    FreshnessPolicy, biometric_hash, kdf_from_gt, password_digest, sym_decrypt, xor_mask,
)
from tmis_workbench.protocol import (
    LoginRequest, PatientCredentials, ServerResponse, card_local_verify,
    decode_auth_plaintext, patient_finish, patient_login_start,
    patient_make_registration, register_patient, server_handle_login, server_keygen,
)

import oracles

CREDS = PatientCredentials(b"alice", b"hunter2", b"\x01" * 32)


def setup(params=TEST, seed=1, creds=CREDS, delta=1000):
    rng = random.Random(seed)
    server = server_keygen(params, b"server", rng, FreshnessPolicy(delta))
    card = register_patient(server, patient_make_registration(creds))
    return rng, server, card


def handshake(params=TEST, seed=1, step=5, delta=1000, start=10_000):
    rng, server, card = setup(params, seed, delta=delta)
    clock = LogicalClock(start, step)
    pstate, req = patient_login_start(card, CREDS, server.ID_s, clock, rng)
    sstate, resp = server_handle_login(server, req, clock, rng)
    sk = patient_finish(pstate, resp, clock, server.policy)
    return server, pstate, req, sstate, resp, sk


# -- keygen and registration ------------------------------------------------

def test_keygen():
    a = server_keygen(TEST, b"s", random.Random(5))
    b = server_keygen(TEST, b"s", random.Random(5))
    assert a.s == b.s and 1 <= a.s < TEST.q
    assert a.P_pub == g1_scalar_mul(a.s, TEST.generator)
    assert a.registry == {}


def test_keygen_s3_matches_repeated_addition():
    server = server_keygen(TEST, b"s", random.Random(0))
    server.s = 3
    pub = g1_scalar_mul(3, TEST.generator)
    assert (pub.x, pub.y) == oracles.repeated_add(3, (TEST.gx, TEST.gy))


def test_registration_request():
    req = patient_make_registration(CREDS)
    assert req == patient_make_registration(CREDS)
    assert req.ID_i == b"alice"
    assert xor_mask(req.C_i, biometric_hash(CREDS.B_i)) == password_digest(CREDS.PW_i)
    other = dataclasses.replace(CREDS, PW_i=b"hunter3")
    assert patient_make_registration(other).C_i != req.C_i
    with pytest.raises(EmptyIdentity):
        PatientCredentials(b"", b"pw", b"b")


def test_registry_counter():
    _, server, _ = setup()
    assert server.registry[b"alice"] == 0
    req = patient_make_registration(CREDS)
    for n in range(1, 5):
        register_patient(server, req)
        assert server.registry[b"alice"] == n


def test_card_contents():
    _, server, card = setup()
    req = patient_make_registration(CREDS)
    assert xor_mask(card.W_i, server.mask(b"alice")) == req.C_i
    assert card.P_pub == server.P_pub


def test_card_local_verify():
    _, _, card = setup(DESK)
    assert card_local_verify(card, CREDS)
    assert not card_local_verify(card, dataclasses.replace(CREDS, PW_i=b"wrong"))
    assert not card_local_verify(card, dataclasses.replace(CREDS, B_i=b"\x02" * 32))


def test_login_rejects_wrong_credentials():
    rng, server, card = setup(DESK)
    with pytest.raises(CardRejected):
        patient_login_start(card, dataclasses.replace(CREDS, PW_i=b"x"), b"server",
                            LogicalClock(0), rng)


# -- handshake --------------------------------------------------------------

@pytest.mark.parametrize("params", [TEST, DESK])
def test_honest_handshake_agrees(params):
    server, pstate, req, sstate, resp, sk = handshake(params)
    assert sk == sstate.SK_s == pstate.SK_i
    assert pstate.L_i == sstate.L_s
    assert pstate.K_i == sstate.K_s
    assert req.R_i == g1_scalar_mul(pstate.r_i, pstate.Q_i)
    assert sstate.R_s == g1_scalar_mul(sstate.r_s, sstate.Q_i)
    assert sstate.ID_i == b"alice"


def test_login_payload_roundtrip():
    _, pstate, req, _, _, _ = handshake()
    pt = sym_decrypt(kdf_from_gt(pstate.K_i), req.Auth_i)
    assert decode_auth_plaintext(pt, TEST) == (b"alice", req.T_i, pstate.r_i)


def test_k_i_bilinearity_oracle():
    server, pstate, *_ = handshake()
    base = pairing(TEST.generator, pstate.Q_i)
    assert pstate.K_i == gt_pow(base, server.s * pstate.r_i)


def test_wire_roundtrip():
    _, _, req, _, resp, _ = handshake(DESK)
    assert LoginRequest.from_bytes(req.to_bytes(), DESK) == req
    assert ServerResponse.from_bytes(resp.to_bytes(), DESK) == resp


def test_distinct_sessions_have_distinct_keys():
    seen = {}
    for seed in range(100):
        _, pstate, req, sstate, resp, sk = handshake(TEST, seed, start=1000 * seed)
        seen[sk] = (pstate.r_i, sstate.r_s, req.T_i, resp.T_s)
    assert len(seen) == 100


def test_same_ephemerals_and_times_give_same_key():
    # on TEST only 100 (r_i, r_s) pairs exist; the key is a function of them
    a = handshake(TEST, 4)
    b = handshake(TEST, 4)
    assert a[-1] == b[-1]


def test_stale_request_replay():
    rng, server, card = setup(delta=50)
    clock = LogicalClock(0, 5)
    _, req = patient_login_start(card, CREDS, server.ID_s, clock, rng)
    with pytest.raises(StaleTimestamp):
        server_handle_login(server, req, LogicalClock(req.T_i + 51, 0), rng)


def test_future_dated_request():
    rng, server, card = setup()
    _, req = patient_login_start(card, CREDS, server.ID_s, LogicalClock(0, 5), rng)
    with pytest.raises(StaleTimestamp):
        server_handle_login(server, req, LogicalClock(req.T_i - 10, 5), rng)


def test_tampered_r_i_rejected():
    rng, server, card = setup()
    clock = LogicalClock(0, 5)
    _, req = patient_login_start(card, CREDS, server.ID_s, clock, rng)
    for k in [0, 2, 3, 10]:
        bad = dataclasses.replace(req, R_i=g1_scalar_mul(k, req.R_i))
        with pytest.raises((DecryptFailure, PointCheckFailed)):
            server_handle_login(server, bad, LogicalClock(req.T_i, 5), rng)


def test_tampered_outer_timestamp():
    rng, server, card = setup()
    _, req = patient_login_start(card, CREDS, server.ID_s, LogicalClock(100, 5), rng)
    bad = dataclasses.replace(req, T_i=req.T_i - 1)
    with pytest.raises(TimestampMismatch):
        server_handle_login(server, bad, LogicalClock(req.T_i, 5), rng)


def test_tampered_response():
    server, pstate, req, sstate, resp, _ = handshake(DESK)

    def finish(r):
        st = dataclasses.replace(pstate, L_i=None, SK_i=None)
        return patient_finish(st, r, LogicalClock(resp.T_s, 5), server.policy)

    assert finish(resp) == sstate.SK_s
    with pytest.raises(AuthMismatch):
        finish(dataclasses.replace(resp, Auth_s=resp.Auth_s ^ 1))
    with pytest.raises(AuthMismatch):
        finish(dataclasses.replace(resp, R_s=g1_scalar_mul(7, resp.R_s)))
    with pytest.raises(AuthMismatch):
        finish(dataclasses.replace(resp, T_s=resp.T_s - 1))
    with pytest.raises(StaleTimestamp):
        patient_finish(pstate, resp, LogicalClock(resp.T_s + 5000, 5), server.policy)
