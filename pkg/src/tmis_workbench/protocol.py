"""Registration and the three-message login/authentication handshake.

Roles are plain functions over small state records::

    server = server_keygen(TEST, b"server", rng)
    card = register_patient(server, patient_make_registration(creds))
    pstate, req = patient_login_start(card, creds, server.ID_s, clock, rng)
    sstate, resp = server_handle_login(server, req, clock, rng)
    sk = patient_finish(pstate, resp, clock)      # == sstate.SK_s

Two formula choices differ from a literal transcription of the scheme.  The
patient's pairing value is ``K_i = e(P_pub, r_i*Q_i)`` (with ``Q_s`` in that
slot the two sides never agree), and the server's is ``K_s = e(s*R_i, P)``.
Both equal ``e(P, Q_i)^(s*r_i)``.
"""
from __future__ import annotations

import hmac
import secrets
from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    CurveParams, G1Point, GtElement, encode_fields, g1_scalar_mul,
    in_subgroup, map_to_point, pairing, scalar_from_bytes, scalar_to_bytes,
    serialize_g1, serialize_gt, deserialize_g1,
)
from .errors import (
    AuthMismatch, CardRejected, DecodeError, EmptyIdentity, PointCheckFailed,
    StaleTimestamp, TimestampMismatch,
)
from .primitives import (
    DIGEST_LEN, Ciphertext, FreshnessPolicy, biometric_hash, check_freshness,
    digest, hash_to_scalar, kdf_from_gt, password_digest, sym_decrypt,
    sym_encrypt, xor_mask,
)

MSG_LOGIN = 0x01
MSG_RESPONSE = 0x02


def ts_bytes(t: int) -> bytes:
    return t.to_bytes(8, "big")


def session_key(T_i: int, R_i: G1Point, T_s: int, R_s: G1Point, L: G1Point) -> bytes:
    """``SK = digest(T_i | R_i | T_s | R_s | L)`` as raw 32 bytes."""
    return digest(encode_fields(
        ts_bytes(T_i), serialize_g1(R_i), ts_bytes(T_s), serialize_g1(R_s), serialize_g1(L),
    ))


def server_auth(T_i: int, R_i: G1Point, T_s: int, R_s: G1Point, L: G1Point, K: GtElement) -> int:
    return hash_to_scalar(encode_fields(
        ts_bytes(T_i), serialize_g1(R_i), ts_bytes(T_s), serialize_g1(R_s),
        serialize_g1(L), serialize_gt(K),
    ), R_i.params)


def _random_scalar(rng, params: CurveParams) -> int:
    return rng.randrange(1, params.q)


# ---------------------------------------------------------------------------
# State and messages
# ---------------------------------------------------------------------------

@dataclass
class ServerState:
    s: int
    P_pub: G1Point
    ID_s: bytes
    params: CurveParams
    policy: FreshnessPolicy
    registry: dict = field(default_factory=dict)

    def mask(self, ID_i: bytes) -> bytes:
        """Digest form of ``h(ID_i | s)``, the 32-byte mask hiding ``C_i``."""
        return digest(encode_fields(ID_i, scalar_to_bytes(self.params, self.s)))


@dataclass(frozen=True)
class PatientCredentials:
    ID_i: bytes
    PW_i: bytes
    B_i: bytes

    def __post_init__(self):
        if not self.ID_i:
            raise EmptyIdentity("patient identity must be non-empty")


@dataclass(frozen=True)
class RegistrationRequest:
    C_i: bytes
    ID_i: bytes


@dataclass(frozen=True)
class SmartCard:
    V_i: int
    W_i: bytes
    P_pub: G1Point
    params: CurveParams


@dataclass(frozen=True)
class LoginRequest:
    R_i: G1Point
    T_i: int
    Auth_i: Ciphertext

    def to_bytes(self) -> bytes:
        c = self.Auth_i.to_bytes()
        return (bytes([MSG_LOGIN]) + serialize_g1(self.R_i) + ts_bytes(self.T_i)
                + len(c).to_bytes(4, "big") + c)

    @classmethod
    def from_bytes(cls, data: bytes, params: CurveParams) -> "LoginRequest":
        n = 1 + 2 * params.coord_len
        if len(data) < 1 + n + 8 + 4 or data[0] != MSG_LOGIN:
            raise DecodeError("not a login request")
        R_i = deserialize_g1(data[1:1 + n], params)
        off = 1 + n
        T_i = int.from_bytes(data[off:off + 8], "big")
        clen = int.from_bytes(data[off + 8:off + 12], "big")
        c = data[off + 12:]
        if len(c) != clen:
            raise DecodeError("ciphertext length prefix does not match")
        return cls(R_i, T_i, Ciphertext.from_bytes(c))


@dataclass(frozen=True)
class ServerResponse:
    R_s: G1Point
    T_s: int
    Auth_s: int

    def to_bytes(self) -> bytes:
        return (bytes([MSG_RESPONSE]) + serialize_g1(self.R_s) + ts_bytes(self.T_s)
                + self.Auth_s.to_bytes(DIGEST_LEN, "big"))

    @classmethod
    def from_bytes(cls, data: bytes, params: CurveParams) -> "ServerResponse":
        n = 1 + 2 * params.coord_len
        if len(data) != 1 + n + 8 + DIGEST_LEN or data[0] != MSG_RESPONSE:
            raise DecodeError("not a server response")
        R_s = deserialize_g1(data[1:1 + n], params)
        T_s = int.from_bytes(data[1 + n:1 + n + 8], "big")
        return cls(R_s, T_s, int.from_bytes(data[1 + n + 8:], "big"))


@dataclass
class PatientSessionState:
    r_i: int
    Q_i: G1Point
    Q_s: G1Point
    K_i: GtElement
    T_i: int
    R_i: G1Point
    L_i: Optional[G1Point] = None
    SK_i: Optional[bytes] = None


@dataclass
class ServerSessionState:
    r_s: int
    Q_i: G1Point
    Q_s: G1Point
    K_s: GtElement
    R_s: G1Point
    L_s: G1Point
    T_s: int
    SK_s: bytes
    ID_i: bytes


# ---------------------------------------------------------------------------
# Registration
# ---------------------------------------------------------------------------

def server_keygen(params: CurveParams, ID_s: bytes, rng=None,
                  policy: FreshnessPolicy = FreshnessPolicy(1000)) -> ServerState:
    rng = rng or secrets.SystemRandom()
    s = _random_scalar(rng, params)
    return ServerState(s=s, P_pub=g1_scalar_mul(s, params.generator), ID_s=ID_s,
                       params=params, policy=policy)


def masked_credential(creds: PatientCredentials) -> bytes:
    """``C_i = digest(PW_i) xor H_B(B_i)``."""
    return xor_mask(password_digest(creds.PW_i), biometric_hash(creds.B_i))


def patient_make_registration(creds: PatientCredentials) -> RegistrationRequest:
    if not creds.ID_i:
        raise EmptyIdentity("patient identity must be non-empty")
    return RegistrationRequest(C_i=masked_credential(creds), ID_i=creds.ID_i)


def card_verifier(ID_i: bytes, C_i: bytes, params: CurveParams) -> int:
    return hash_to_scalar(encode_fields(ID_i, C_i), params)


def register_patient(server: ServerState, req: RegistrationRequest) -> SmartCard:
    """Issue a smart card and bump the per-identity registration counter.

    Callers must serialize registrations against one server.
    """
    if req.ID_i in server.registry:
        server.registry[req.ID_i] += 1
    else:
        server.registry[req.ID_i] = 0
    return SmartCard(
        V_i=card_verifier(req.ID_i, req.C_i, server.params),
        W_i=xor_mask(req.C_i, server.mask(req.ID_i)),
        P_pub=server.P_pub,
        params=server.params,
    )


def card_local_verify(card: SmartCard, creds: PatientCredentials) -> bool:
    return card_verifier(creds.ID_i, masked_credential(creds), card.params) == card.V_i


# ---------------------------------------------------------------------------
# Handshake
# ---------------------------------------------------------------------------

def _encode_auth_plaintext(ID_i: bytes, T_i: int, r_i: int, params: CurveParams) -> bytes:
    return encode_fields(ID_i, ts_bytes(T_i), scalar_to_bytes(params, r_i))


def decode_auth_plaintext(data: bytes, params: CurveParams) -> tuple[bytes, int, int]:
    """Inverse of the ``(ID_i, T_i, r_i)`` encoding carried inside ``Auth_i``."""
    parts = []
    off = 0
    while off < len(data):
        if off + 4 > len(data):
            raise DecodeError("truncated length prefix")
        n = int.from_bytes(data[off:off + 4], "big")
        off += 4
        if off + n > len(data):
            raise DecodeError("truncated field")
        parts.append(data[off:off + n])
        off += n
    if len(parts) != 3 or len(parts[1]) != 8:
        raise DecodeError("malformed login plaintext")
    return parts[0], int.from_bytes(parts[1], "big"), scalar_from_bytes(params, parts[2])


def patient_login_start(card: SmartCard, creds: PatientCredentials, ID_s: bytes,
                        clock, rng=None) -> tuple[PatientSessionState, LoginRequest]:
    if not card_local_verify(card, creds):
        raise CardRejected("identity, password or biometric does not match the card")
    rng = rng or secrets.SystemRandom()
    params = card.params
    r_i = _random_scalar(rng, params)
    T_i = clock.now()
    Q_i = map_to_point(creds.ID_i, params)
    Q_s = map_to_point(ID_s, params)
    R_i = g1_scalar_mul(r_i, Q_i)
    K_i = pairing(card.P_pub, R_i)
    auth_i = sym_encrypt(kdf_from_gt(K_i), _encode_auth_plaintext(creds.ID_i, T_i, r_i, params))
    state = PatientSessionState(r_i=r_i, Q_i=Q_i, Q_s=Q_s, K_i=K_i, T_i=T_i, R_i=R_i)
    return state, LoginRequest(R_i=R_i, T_i=T_i, Auth_i=auth_i)


def server_handle_login(server: ServerState, req: LoginRequest, clock,
                        rng=None) -> tuple[ServerSessionState, ServerResponse]:
    params = server.params
    now = clock.now()
    if not check_freshness(req.T_i, now, server.policy):
        raise StaleTimestamp(f"T_i={req.T_i} received at {now}")
    if req.R_i.is_infinity or not in_subgroup(req.R_i):
        raise PointCheckFailed("R_i is not a non-trivial subgroup element")
    K_s = pairing(g1_scalar_mul(server.s, req.R_i), params.generator)
    ID_i, inner_T_i, r_i = decode_auth_plaintext(sym_decrypt(kdf_from_gt(K_s), req.Auth_i), params)
    if inner_T_i != req.T_i:
        raise TimestampMismatch(f"outer T_i={req.T_i}, inner T_i={inner_T_i}")
    Q_i = map_to_point(ID_i, params)
    if r_i == 0 or g1_scalar_mul(r_i, Q_i) != req.R_i:
        raise PointCheckFailed("R_i != r_i * Q_i")

    rng = rng or secrets.SystemRandom()
    r_s = _random_scalar(rng, params)
    Q_s = map_to_point(server.ID_s, params)
    R_s = g1_scalar_mul(r_s, Q_i)
    L_s = g1_scalar_mul(r_s, req.R_i)
    T_s = now
    auth_s = server_auth(req.T_i, req.R_i, T_s, R_s, L_s, K_s)
    SK_s = session_key(req.T_i, req.R_i, T_s, R_s, L_s)
    state = ServerSessionState(r_s=r_s, Q_i=Q_i, Q_s=Q_s, K_s=K_s, R_s=R_s, L_s=L_s,
                               T_s=T_s, SK_s=SK_s, ID_i=ID_i)
    return state, ServerResponse(R_s=R_s, T_s=T_s, Auth_s=auth_s)


def patient_finish(state: PatientSessionState, resp: ServerResponse, clock,
                   policy: FreshnessPolicy = FreshnessPolicy(1000)) -> bytes:
    now = clock.now()
    if not check_freshness(resp.T_s, now, policy):
        raise StaleTimestamp(f"T_s={resp.T_s} received at {now}")
    L_i = g1_scalar_mul(state.r_i, resp.R_s)
    expected = server_auth(state.T_i, state.R_i, resp.T_s, resp.R_s, L_i, state.K_i)
    width = DIGEST_LEN
    if not hmac.compare_digest(expected.to_bytes(width, "big"), resp.Auth_s.to_bytes(width, "big")):
        raise AuthMismatch("Auth_s does not verify")
    state.L_i = L_i
    state.SK_i = session_key(state.T_i, state.R_i, resp.T_s, resp.R_s, L_i)
    return state.SK_i
