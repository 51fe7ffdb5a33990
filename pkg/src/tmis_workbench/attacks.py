"""Session-key recovery from a public transcript plus one leaked secret.

Both adversaries are pure functions of ``(Transcript, leak)``.  Neither takes
a role state, so what each one can read is fixed by its signature:

* :func:`kssti_attack` gets the server's ephemeral ``r_s`` and computes
  ``L_s = r_s * R_i``.
* :func:`pfs_attack` gets the server's long-term ``s``, rebuilds ``K_s``,
  decrypts ``Auth_i`` to learn ``(ID_i, r_i)`` and computes ``L_i = r_i * R_s``.

Either ``L`` together with ``(T_i, R_i, T_s, R_s)`` gives the session key.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    CurveParams, G1Point, g1_scalar_mul, pairing, require_on_curve, serialize_g1,
)
from .errors import ParamsMismatch
from .primitives import Ciphertext, kdf_from_gt, sym_decrypt
from .protocol import decode_auth_plaintext, session_key

__all__ = ["Transcript", "LeakedEphemeral", "LeakedLongTerm", "AttackOutcome",
           "kssti_attack", "pfs_attack"]


@dataclass(frozen=True)
class Transcript:
    """What an eavesdropper sees of one handshake, and nothing more."""

    R_i: G1Point
    T_i: int
    Auth_i: Ciphertext
    R_s: G1Point
    T_s: int
    Auth_s: int
    params_label: str


@dataclass(frozen=True)
class LeakedEphemeral:
    r_s: int


@dataclass(frozen=True)
class LeakedLongTerm:
    s: int
    P_pub: G1Point

    def __post_init__(self):
        if g1_scalar_mul(self.s, self.P_pub.params.generator) != self.P_pub:
            raise ValueError("P_pub != s * P")

    @classmethod
    def from_secret(cls, s: int, params: CurveParams) -> "LeakedLongTerm":
        return cls(s, g1_scalar_mul(s, params.generator))


@dataclass
class AttackOutcome:
    recovered_sk: bytes
    shared_point: G1Point
    trace: list = field(default_factory=list)
    recovered_id: Optional[bytes] = None
    recovered_r_i: Optional[int] = None


def _check(t: Transcript, params: CurveParams) -> None:
    if t.params_label != params.security_label:
        raise ParamsMismatch(f"transcript is for {t.params_label!r}, not {params.security_label!r}")
    require_on_curve(t.R_i, t.R_s)


def _hex(pt: G1Point) -> str:
    return serialize_g1(pt).hex()


def kssti_attack(t: Transcript, leak: LeakedEphemeral, params: CurveParams) -> AttackOutcome:
    _check(t, params)
    L_s = g1_scalar_mul(leak.r_s, t.R_i)
    sk = session_key(t.T_i, t.R_i, t.T_s, t.R_s, L_s)
    return AttackOutcome(sk, L_s, trace=[
        ("L_s = r_s*R_i", _hex(L_s)),
        ("SK = h(T_i|R_i|T_s|R_s|L_s)", sk.hex()),
    ])


def pfs_attack(t: Transcript, leak: LeakedLongTerm, params: CurveParams) -> AttackOutcome:
    """Raises :class:`~tmis_workbench.errors.DecryptFailure` when ``leak.s``
    is not the key the transcript was produced under."""
    _check(t, params)
    K_s = pairing(g1_scalar_mul(leak.s, t.R_i), params.generator)
    key = kdf_from_gt(K_s)
    ID_i, _, r_i = decode_auth_plaintext(sym_decrypt(key, t.Auth_i), params)
    L_i = g1_scalar_mul(r_i, t.R_s)
    sk = session_key(t.T_i, t.R_i, t.T_s, t.R_s, L_i)
    return AttackOutcome(sk, L_i, recovered_id=ID_i, recovered_r_i=r_i, trace=[
        ("K_s = e(s*R_i, P)", f"{K_s.value.a:x}+{K_s.value.b:x}i"),
        ("k_i = KDF(K_s)", key.hex()),
        ("(ID_i|T_i|r_i) = D_k(Auth_i)", f"ID_i={ID_i.hex()} r_i={r_i:x}"),
        ("L_i = r_i*R_s = r_i*r_s*Q_i = r_s*R_i = L_s", _hex(L_i)),
        ("SK = h(T_i|R_i|T_s|R_s|L_i)", sk.hex()),
    ])
