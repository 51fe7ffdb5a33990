"""Hashes, symmetric encryption, key derivation and timestamp freshness.

All hashing is SHA-256.  Every multi-part hash input goes through
:func:`~tmis_workbench.algebra.encode_fields`, so ASCII domain tags such as
``"HB"`` or ``"KDF"`` are length-prefixed fields like any other.
"""
from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

from .algebra import CurveParams, GtElement, encode_fields, serialize_gt
from .errors import DecodeError, DecryptFailure

__all__ = [
    "DIGEST_LEN", "Ciphertext", "FreshnessPolicy", "digest", "hash_to_scalar",
    "biometric_hash", "password_digest", "xor_mask", "kdf_from_gt",
    "sym_encrypt", "sym_decrypt", "check_freshness", "encode_fields",
]

DIGEST_LEN = 32


def digest(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def hash_to_scalar(data: bytes, params: CurveParams) -> int:
    """``h``: SHA-256 of ``data`` read big-endian, reduced mod ``q``."""
    return int.from_bytes(digest(data), "big") % params.q


def biometric_hash(b: bytes) -> bytes:
    return digest(encode_fields(b"HB", b))


def password_digest(pw: bytes) -> bytes:
    return digest(encode_fields(b"PW", pw))


def xor_mask(a: bytes, b: bytes) -> bytes:
    """Bytewise XOR; the shorter operand is zero-padded on the left to the
    longer length (at least 32 bytes)."""
    n = max(len(a), len(b), DIGEST_LEN)
    a = a.rjust(n, b"\0")
    b = b.rjust(n, b"\0")
    return bytes(x ^ y for x, y in zip(a, b))


def kdf_from_gt(k: GtElement) -> bytes:
    """32-byte symmetric key from a pairing value."""
    return digest(encode_fields(b"KDF", serialize_gt(k)))


@dataclass(frozen=True)
class Ciphertext:
    body: bytes
    tag: bytes

    def to_bytes(self) -> bytes:
        return self.body + self.tag

    @classmethod
    def from_bytes(cls, data: bytes) -> "Ciphertext":
        if len(data) < DIGEST_LEN:
            raise DecodeError("ciphertext shorter than its tag")
        return cls(data[:-DIGEST_LEN], data[-DIGEST_LEN:])


def _keystream(key: bytes, n: int) -> bytes:
    blocks = (n + DIGEST_LEN - 1) // DIGEST_LEN
    return b"".join(
        digest(encode_fields(key, b"ENC", j.to_bytes(8, "big"))) for j in range(blocks)
    )[:n]


def _mac(key: bytes, body: bytes) -> bytes:
    return digest(encode_fields(key, b"MAC", body))


def sym_encrypt(key: bytes, plaintext: bytes) -> Ciphertext:
    """Hash-counter keystream XOR, then encrypt-then-MAC with a keyed digest."""
    body = bytes(x ^ y for x, y in zip(plaintext, _keystream(key, len(plaintext))))
    return Ciphertext(body, _mac(key, body))


def sym_decrypt(key: bytes, c: Ciphertext) -> bytes:
    if not hmac.compare_digest(_mac(key, c.body), c.tag):
        raise DecryptFailure("authentication tag mismatch")
    return bytes(x ^ y for x, y in zip(c.body, _keystream(key, len(c.body))))


@dataclass(frozen=True)
class FreshnessPolicy:
    """Maximum accepted age of a timestamp, in logical milliseconds.

    Zero is allowed: it only accepts a message received at the instant it
    was stamped, which makes stale-message handling easy to exercise.
    """

    delta_max_millis: int

    def __post_init__(self):
        if self.delta_max_millis < 0:
            raise ValueError("delta_max_millis must be non-negative")


def check_freshness(sent: int, received_at: int, policy: FreshnessPolicy) -> bool:
    """Accept iff ``0 <= received_at - sent <= delta_max``."""
    return 0 <= received_at - sent <= policy.delta_max_millis
