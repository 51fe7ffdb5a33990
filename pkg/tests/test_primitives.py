import hashlib
import random

import pytest
from hypothesis import given, strategies as st

from tmis_workbench.algebra import gt_pow, pairing, serialize_gt
from tmis_workbench.errors import DecodeError, DecryptFailure
from tmis_workbench.params import TEST
from tmis_workbench.primitives import (
    Ciphertext, FreshnessPolicy, biometric_hash, check_freshness, digest,
    encode_fields, hash_to_scalar, kdf_from_gt, sym_decrypt, sym_encrypt, xor_mask,
)

KEY = bytes(range(32))


def test_encode_fields():
    assert encode_fields(b"ab", b"") == b"\0\0\0\x02ab\0\0\0\0"
    # no ambiguous splits
    assert encode_fields(b"a", b"bc") != encode_fields(b"ab", b"c")


def test_hash_to_scalar():
    assert hash_to_scalar(b"x", TEST) == hash_to_scalar(b"x", TEST)
    expected = int(hashlib.sha256(b"").hexdigest(), 16) % 11
    assert expected == 9
    assert hash_to_scalar(b"", TEST) == 9


def test_hash_to_scalar_distribution():
    rng = random.Random(1)
    counts = [0] * 11
    for _ in range(10_000):
        v = hash_to_scalar(rng.randbytes(16), TEST)
        assert 0 <= v < 11
        counts[v] += 1
    assert max(counts) <= 5 * 10_000 / 11


def test_biometric_hash_domain_separated():
    b = b"fingerprint"
    assert biometric_hash(b) == biometric_hash(b)
    assert biometric_hash(b) != digest(b)
    assert len(biometric_hash(b)) == 32


def test_biometric_hash_avalanche():
    rng = random.Random(3)
    flipped = 0
    for _ in range(100):
        b = bytearray(rng.randbytes(32))
        h0 = biometric_hash(bytes(b))
        bit = rng.randrange(256)
        b[bit // 8] ^= 1 << (bit % 8)
        h1 = biometric_hash(bytes(b))
        flipped += sum(bin(x ^ y).count("1") for x, y in zip(h0, h1))
    assert 0.45 <= flipped / (100 * 256) <= 0.55


def test_xor_mask():
    x = bytes(range(32))
    assert xor_mask(x, x) == bytes(32)
    y = bytes(reversed(x))
    assert xor_mask(xor_mask(x, y), y) == x
    assert xor_mask(b"\x0f" * 32, b"\x33" * 32) == b"\x3c" * 32
    assert xor_mask(b"\x01", b"\x02") == bytes(31) + b"\x03"


def test_kdf_distinct_over_subgroup():
    g = pairing(TEST.generator, TEST.generator)
    elems = [gt_pow(g, k) for k in range(11)]
    keys = {kdf_from_gt(e) for e in elems}
    assert len(keys) == 11
    assert kdf_from_gt(elems[3]) == kdf_from_gt(gt_pow(g, 14))
    assert kdf_from_gt(elems[0]) == digest(encode_fields(b"KDF", serialize_gt(elems[0])))


def test_sym_roundtrip_lengths():
    for n in range(0, 1025, 7):
        m = bytes(i % 251 for i in range(n))
        c = sym_encrypt(KEY, m)
        assert len(c.body) == n and len(c.tag) == 32
        assert sym_decrypt(KEY, c) == m


@given(st.binary(max_size=200))
def test_sym_roundtrip_property(m):
    assert sym_decrypt(KEY, sym_encrypt(KEY, m)) == m


def test_sym_wrong_key_and_tamper():
    c = sym_encrypt(KEY, b"hello world")
    with pytest.raises(DecryptFailure):
        sym_decrypt(bytes(32), c)
    body = bytearray(c.body)
    body[0] ^= 1
    with pytest.raises(DecryptFailure):
        sym_decrypt(KEY, Ciphertext(bytes(body), c.tag))
    with pytest.raises(DecryptFailure):
        sym_decrypt(KEY, Ciphertext(c.body, bytes(32)))
    assert Ciphertext.from_bytes(c.to_bytes()) == c
    with pytest.raises(DecodeError):
        Ciphertext.from_bytes(b"short")


def test_freshness():
    pol = FreshnessPolicy(100)
    assert check_freshness(5, 5, pol)
    assert check_freshness(5, 105, pol)
    assert not check_freshness(5, 106, pol)
    assert not check_freshness(5, 4, pol)
    with pytest.raises(ValueError):
        FreshnessPolicy(-1)


@given(st.integers(0, 500), st.integers(0, 10 ** 6))
def test_freshness_monotone(gap, delta):
    pol = FreshnessPolicy(delta)
    if check_freshness(0, gap, pol):
        assert all(check_freshness(0, g, pol) for g in range(gap + 1))
