"""Field, curve and symmetric-pairing arithmetic.

The curve is the supersingular ``E: y^2 = x^3 + x`` over ``F_p`` with
``p = 3 (mod 4)``.  It has ``p + 1`` rational points and embedding degree 2,
and ``(x, y) -> (-x, i*y)`` (with ``i^2 = -1`` in ``F_p^2``) is a distortion map,
so the reduced Tate pairing composed with it is a symmetric, non-degenerate map
``G1 x G1 -> mu_q``.

Field elements of ``F_p`` are plain ints kept in ``[0, p)``; scalars are plain
ints reduced mod ``q``.  Only ``F_p^2`` values and curve points get classes.
Coordinates are affine throughout.  Nothing here is constant time.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Union

from .errors import DecodeError, MapFailure, OffCurvePoint, ParamsMismatch

__all__ = [
    "CurveParams", "Fp2", "G1Point", "GtElement", "Fp2Point",
    "g1_add", "g1_neg", "g1_scalar_mul", "is_on_curve", "in_subgroup",
    "distortion_map", "pairing", "gt_pow", "gt_identity", "map_to_point",
    "serialize_g1", "deserialize_g1", "serialize_gt", "deserialize_gt",
    "scalar", "scalar_to_bytes", "scalar_from_bytes", "encode_fields",
]

TAG_INFINITY = 0x00
TAG_AFFINE = 0x04
MAP_MAX_COUNTER = 256


def encode_fields(*fields: bytes) -> bytes:
    """Length-prefixed concatenation: each field as 4-byte BE length + bytes."""
    out = bytearray()
    for f in fields:
        out += len(f).to_bytes(4, "big")
        out += f
    return bytes(out)


@dataclass(frozen=True)
class CurveParams:
    """Public parameters of one pairing group.

    ``p`` is the field prime, ``q`` the prime subgroup order with
    ``cofactor * q == p + 1``, and ``(gx, gy)`` the affine generator ``P``.
    """

    p: int
    q: int
    cofactor: int
    gx: int
    gy: int
    security_label: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.p % 4 != 3:
            raise ValueError("p must be 3 mod 4")
        if self.cofactor * self.q != self.p + 1:
            raise ValueError("cofactor * q must equal p + 1")
        if (self.gy * self.gy - self.gx ** 3 - self.gx) % self.p:
            raise ValueError("generator is not on the curve")

    @property
    def coord_len(self) -> int:
        return (self.p.bit_length() + 7) // 8

    @property
    def scalar_len(self) -> int:
        return (self.q.bit_length() + 7) // 8

    @cached_property
    def generator(self) -> "G1Point":
        return G1Point(self.gx, self.gy, self)

    @cached_property
    def infinity(self) -> "G1Point":
        return G1Point(None, None, self)

    def check_generator(self) -> bool:
        """True iff ``P`` is not the identity and ``q * P`` is."""
        g = self.generator
        return not g.is_infinity and g1_scalar_mul(self.q, g).is_infinity


def _same(a: CurveParams, b: CurveParams) -> None:
    if a is not b and a != b:
        raise ParamsMismatch(f"{a.security_label} vs {b.security_label}")


def scalar(params: CurveParams, value: int) -> int:
    return value % params.q


def scalar_to_bytes(params: CurveParams, k: int) -> bytes:
    return (k % params.q).to_bytes(params.scalar_len, "big")


def scalar_from_bytes(params: CurveParams, data: bytes) -> int:
    if len(data) != params.scalar_len:
        raise DecodeError(f"scalar must be {params.scalar_len} bytes, got {len(data)}")
    k = int.from_bytes(data, "big")
    if k >= params.q:
        raise DecodeError("non-canonical scalar")
    return k


# ---------------------------------------------------------------------------
# F_p^2 = F_p[i] / (i^2 + 1)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fp2:
    """``a + b*i`` with ``i^2 = -1``; components reduced mod ``p``."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @classmethod
    def one(cls, p: int) -> "Fp2":
        return cls(1, 0, p)

    def _coerce(self, other) -> "Fp2":
        if isinstance(other, int):
            return Fp2(other, 0, self.p)
        if other.p != self.p:
            raise ParamsMismatch("F_p^2 elements over different primes")
        return other

    def __add__(self, other):
        o = self._coerce(other)
        return Fp2(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Fp2(self.a - o.a, self.b - o.b, self.p)

    def __neg__(self):
        return Fp2(-self.a, -self.b, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return Fp2(*_fp2_mul((self.a, self.b), (o.a, o.b), self.p), self.p)

    __rmul__ = __mul__

    def conjugate(self) -> "Fp2":
        return Fp2(self.a, -self.b, self.p)

    def inverse(self) -> "Fp2":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_p^2")
        return Fp2(*_fp2_inv((self.a, self.b), self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp2(*_fp2_pow((self.a, self.b), e, self.p), self.p)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def __repr__(self):
        return f"Fp2({self.a} + {self.b}i)"


def _fp2_mul(x, y, p):
    a, b = x
    c, d = y
    ac = a * c
    bd = b * d
    return (ac - bd) % p, ((a + b) * (c + d) - ac - bd) % p


def _fp2_sqr(x, p):
    a, b = x
    return (a + b) * (a - b) % p, 2 * a * b % p


def _fp2_inv(x, p):
    a, b = x
    n = pow(a * a + b * b, -1, p)
    return a * n % p, -b * n % p


def _fp2_pow(x, e, p):
    result = (1, 0)
    for bit in bin(e)[2:]:
        result = _fp2_sqr(result, p)
        if bit == "1":
            result = _fp2_mul(result, x, p)
    return result


class Fp2Point(NamedTuple):
    """Affine point of ``E(F_p^2)``; only produced by :func:`distortion_map`."""

    x: Fp2
    y: Fp2

    def on_curve(self) -> bool:
        return (self.y * self.y - (self.x * self.x * self.x + self.x)).is_zero()


# ---------------------------------------------------------------------------
# G1 = E(F_p)[q]
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class G1Point:
    """Affine point of ``E(F_p)``; ``x is None`` encodes the point at infinity."""

    x: Optional[int]
    y: Optional[int]
    params: CurveParams

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, G1Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y and self.params == other.params

    def __hash__(self):
        return hash((self.x, self.y, self.params.p))

    def __add__(self, other: "G1Point") -> "G1Point":
        return g1_add(self, other)

    def __neg__(self) -> "G1Point":
        return g1_neg(self)

    def __sub__(self, other: "G1Point") -> "G1Point":
        return g1_add(self, g1_neg(other))

    def __rmul__(self, k: int) -> "G1Point":
        return g1_scalar_mul(k, self)

    def __repr__(self):
        if self.is_infinity:
            return f"G1Point(O, {self.params.security_label})"
        return f"G1Point({self.x}, {self.y}, {self.params.security_label})"


def _add(a, b, p):
    # a, b: (x, y) tuples or None
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + 1) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _mul(k, a, p):
    if k < 0:
        k = -k
        a = None if a is None else (a[0], -a[1] % p)
    result = None
    for bit in bin(k)[2:]:
        result = _add(result, result, p)
        if bit == "1":
            result = _add(result, a, p)
    return result


def _pt(P: G1Point):
    return None if P.x is None else (P.x, P.y)


def _wrap(t, params: CurveParams) -> G1Point:
    if t is None:
        return params.infinity
    return G1Point(t[0], t[1], params)


def is_on_curve(P: G1Point) -> bool:
    if P.is_infinity:
        return True
    p = P.params.p
    if not (0 <= P.x < p and 0 <= P.y < p):
        return False
    return (P.y * P.y - P.x ** 3 - P.x) % p == 0


def in_subgroup(P: G1Point) -> bool:
    return is_on_curve(P) and g1_scalar_mul(P.params.q, P).is_infinity


def g1_add(P1: G1Point, P2: G1Point) -> G1Point:
    _same(P1.params, P2.params)
    return _wrap(_add(_pt(P1), _pt(P2), P1.params.p), P1.params)


def g1_neg(P1: G1Point) -> G1Point:
    if P1.is_infinity:
        return P1
    return G1Point(P1.x, -P1.y % P1.params.p, P1.params)


def g1_double(P1: G1Point) -> G1Point:
    return g1_add(P1, P1)


def g1_scalar_mul(k: int, P1: G1Point) -> G1Point:
    """``k * P1`` by left-to-right double-and-add (``k`` is not reduced)."""
    return _wrap(_mul(k, _pt(P1), P1.params.p), P1.params)


def distortion_map(P1: Union[G1Point, Fp2Point]) -> Fp2Point:
    """``(x, y) -> (-x, i*y)``."""
    if isinstance(P1, G1Point):
        if P1.is_infinity:
            raise ValueError("distortion map is only defined on affine points")
        p = P1.params.p
        return Fp2Point(Fp2(-P1.x, 0, p), Fp2(0, P1.y, p))
    i = Fp2(0, 1, P1.x.p)
    return Fp2Point(-P1.x, i * P1.y)


# ---------------------------------------------------------------------------
# G2 = mu_q in F_p^2 and the pairing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GtElement:
    value: Fp2
    params: CurveParams = field(compare=False)

    def __mul__(self, other: "GtElement") -> "GtElement":
        _same(self.params, other.params)
        return GtElement(self.value * other.value, self.params)

    def __pow__(self, k: int) -> "GtElement":
        return gt_pow(self, k)

    def is_identity(self) -> bool:
        return self.value.is_one()

    def __repr__(self):
        return f"GtElement({self.value.a} + {self.value.b}i)"


def gt_identity(params: CurveParams) -> GtElement:
    return GtElement(Fp2.one(params.p), params)


def gt_pow(g: GtElement, k: int) -> GtElement:
    """``g^k`` by square-and-multiply; negative ``k`` uses the conjugate,
    which is the inverse on the norm-1 subgroup."""
    v = g.value
    if k < 0:
        v, k = v.conjugate(), -k
    return GtElement(Fp2(*_fp2_pow((v.a, v.b), k, v.p), v.p), g.params)


def _miller(params: CurveParams, P, Q):
    """Miller function ``f_{q,P}`` evaluated at ``phi(Q)``.

    The image ``phi(Q) = (-xq, i*yq)`` has its x-coordinate in ``F_p``, so every
    vertical-line denominator is an ``F_p`` value; those are wiped out by the
    ``p - 1`` factor of the final exponent and are skipped.
    """
    p = params.p
    xp, yp = P
    xq, yq = Q
    f = (1, 0)
    xt, yt = xp, yp
    for bit in bin(params.q)[3:]:
        lam = (3 * xt * xt + 1) * pow(2 * yt, -1, p) % p
        f = _fp2_mul(_fp2_sqr(f, p), ((lam * (xq + xt) - yt) % p, yq), p)
        x3 = (lam * lam - 2 * xt) % p
        yt = (lam * (xt - x3) - yt) % p
        xt = x3
        if bit == "1":
            if xt == xp:
                # T = -P: vertical line, only reached on the final step
                continue
            lam = (yp - yt) * pow(xp - xt, -1, p) % p
            f = _fp2_mul(f, ((lam * (xq + xt) - yt) % p, yq), p)
            x3 = (lam * lam - xt - xp) % p
            yt = (lam * (xt - x3) - yt) % p
            xt = x3
    return f


def _final_exp(f, params: CurveParams):
    p = params.p
    # f^(p-1) = conj(f) / f, since Frobenius is conjugation when p = 3 mod 4
    g = _fp2_mul((f[0], -f[1] % p), _fp2_inv(f, p), p)
    return _fp2_pow(g, (p + 1) // params.q, p)


def pairing(P1: G1Point, P2: G1Point) -> GtElement:
    """Symmetric reduced Tate pairing ``e(P1, phi(P2))^((p^2-1)/q)``."""
    _same(P1.params, P2.params)
    params = P1.params
    if P1.is_infinity or P2.is_infinity:
        return gt_identity(params)
    f = _miller(params, (P1.x, P1.y), (P2.x, P2.y))
    return GtElement(Fp2(*_final_exp(f, params), params.p), params)


# ---------------------------------------------------------------------------
# Hashing onto G1
# ---------------------------------------------------------------------------

def _sqrt(v: int, p: int) -> Optional[int]:
    y = pow(v, (p + 1) // 4, p)
    return y if y * y % p == v % p else None


def map_to_point(msg: bytes, params: CurveParams) -> G1Point:
    """Try-and-increment hash onto the order-``q`` subgroup.

    For each counter the digest of ``("H1", msg, ctr)`` gives ``x`` (mod ``p``)
    and, via its top bit, the parity of ``y``.  The first ``x`` whose
    ``x^3 + x`` is a square yields a point that is then multiplied by the
    cofactor; an identity result moves on to the next counter.
    """
    p = params.p
    for ctr in range(MAP_MAX_COUNTER):
        d = hashlib.sha256(encode_fields(b"H1", msg, ctr.to_bytes(4, "big"))).digest()
        x = int.from_bytes(d, "big") % p
        y = _sqrt((x * x * x + x) % p, p)
        if y is None:
            continue
        if (y & 1) != (d[0] >> 7):
            y = -y % p
        pt = _mul(params.cofactor, (x, y), p)
        if pt is not None:
            return _wrap(pt, params)
    raise MapFailure(f"no subgroup point after {MAP_MAX_COUNTER} counters")


# ---------------------------------------------------------------------------
# Canonical encodings
# ---------------------------------------------------------------------------

def serialize_g1(P1: G1Point) -> bytes:
    n = P1.params.coord_len
    if P1.is_infinity:
        return bytes([TAG_INFINITY]) + bytes(2 * n)
    return bytes([TAG_AFFINE]) + P1.x.to_bytes(n, "big") + P1.y.to_bytes(n, "big")


def deserialize_g1(data: bytes, params: CurveParams) -> G1Point:
    n = params.coord_len
    if len(data) != 1 + 2 * n:
        raise DecodeError(f"G1 encoding must be {1 + 2 * n} bytes, got {len(data)}")
    tag, body = data[0], data[1:]
    if tag == TAG_INFINITY:
        if any(body):
            raise DecodeError("non-canonical encoding of infinity")
        return params.infinity
    if tag != TAG_AFFINE:
        raise DecodeError(f"unknown point tag 0x{tag:02x}")
    x = int.from_bytes(body[:n], "big")
    y = int.from_bytes(body[n:], "big")
    if x >= params.p or y >= params.p:
        raise DecodeError("coordinate not reduced mod p")
    pt = G1Point(x, y, params)
    if not is_on_curve(pt):
        raise DecodeError("point is not on the curve")
    return pt


def serialize_gt(g: GtElement) -> bytes:
    n = g.params.coord_len
    return g.value.a.to_bytes(n, "big") + g.value.b.to_bytes(n, "big")


def deserialize_gt(data: bytes, params: CurveParams) -> GtElement:
    n = params.coord_len
    if len(data) != 2 * n:
        raise DecodeError(f"Gt encoding must be {2 * n} bytes, got {len(data)}")
    a = int.from_bytes(data[:n], "big")
    b = int.from_bytes(data[n:], "big")
    if a >= params.p or b >= params.p:
        raise DecodeError("coordinate not reduced mod p")
    g = GtElement(Fp2(a, b, params.p), params)
    if not gt_pow(g, params.q).is_identity():
        raise DecodeError("element is not in the order-q subgroup")
    return g


def require_on_curve(*points: G1Point) -> None:
    for pt in points:
        if not is_on_curve(pt):
            raise OffCurvePoint(repr(pt))
