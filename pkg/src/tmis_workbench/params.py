"""The two pinned parameter sets and the search that produced them.

``TEST`` is the 44-point curve over ``F_43`` with an order-11 subgroup; it is
small enough to check every group and pairing property exhaustively.
``DESK`` has a 256-bit ``p`` and a 160-bit ``q``; it is found by
:func:`search_desk_params` (re-run by ``tools/find_desk_params.py`` and by the
test suite) and committed below as constants.
"""
from __future__ import annotations

from sympy import isprime, nextprime

from .algebra import CurveParams, _mul, _sqrt

__all__ = ["TEST", "DESK", "PARAM_SETS", "by_label", "first_generator",
           "search_desk_params", "params_to_text", "params_from_text"]


def first_generator(p: int, cofactor: int) -> tuple[int, int]:
    """``cofactor * (x, y)`` for the first point, by ascending ``(x, y)``,
    whose cofactor multiple is not the identity."""
    for x in range(p):
        y = _sqrt((x * x * x + x) % p, p)
        if y is None:
            continue
        for yy in sorted({y, -y % p}):
            g = _mul(cofactor, (x, yy), p)
            if g is not None:
                return g
    raise ValueError("curve has no point outside the cofactor torsion")


def search_desk_params(q_bits: int = 160, p_bits: int = 256) -> CurveParams:
    """Deterministic search for ``p = c*q - 1``.

    ``q`` is the first prime above ``2^(q_bits-1)``.  ``c`` starts at the
    smallest multiple of 4 that makes ``c*q - 1 >= 2^(p_bits-1)`` and steps by
    4 (so ``p = 3 mod 4``) until ``p`` is prime.
    """
    q = int(nextprime(2 ** (q_bits - 1)))
    c = -(-(2 ** (p_bits - 1) + 1) // q)
    c += -c % 4
    while not isprime(c * q - 1):
        c += 4
    p = c * q - 1
    if p.bit_length() != p_bits:
        raise ValueError("search overflowed the requested size")
    gx, gy = first_generator(p, c)
    return CurveParams(p, q, c, gx, gy, security_label="desk")


# cofactor * (2, 15); (0, 0) is skipped, it has order 2
TEST = CurveParams(p=43, q=11, cofactor=4, gx=31, gy=18, security_label="test")

DESK = CurveParams(
    p=57896044618658097711785492516035967025282215702138981273224093101673666319023,
    q=730750818665451459101842416358141509827966271787,
    cofactor=79228162514264337593543950352,
    gx=30088801814606967247626674593956829285874404614399280813087694594194669889077,
    gy=49496624837787458185291239518626893104019736131175637537365492234788589662599,
    security_label="desk",
)

PARAM_SETS = {"test": TEST, "desk": DESK}


def by_label(label: str) -> CurveParams:
    try:
        return PARAM_SETS[label]
    except KeyError:
        raise KeyError(f"unknown parameter set {label!r}") from None


def params_to_text(params: CurveParams) -> str:
    return "".join(f"{k} = {v}\n" for k, v in (
        ("label", params.security_label),
        ("p", params.p),
        ("q", params.q),
        ("gx", params.gx),
        ("gy", params.gy),
    ))


def params_from_text(text: str) -> CurveParams:
    """Parse ``key = value`` lines (decimal integers; ``#`` comments allowed)
    and check the invariants, including primality of ``p`` and ``q``."""
    vals = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed line: {raw!r}")
        vals[key.strip()] = value.strip()
    try:
        p, q = int(vals["p"]), int(vals["q"])
        gx, gy = int(vals["gx"]), int(vals["gy"])
    except KeyError as e:
        raise ValueError(f"missing key {e.args[0]!r}") from None
    if not (isprime(p) and isprime(q)):
        raise ValueError("p and q must be prime")
    if (p + 1) % q:
        raise ValueError("q must divide p + 1")
    params = CurveParams(p, q, (p + 1) // q, gx, gy,
                         security_label=vals.get("label", "custom"))
    if not params.check_generator():
        raise ValueError("generator does not have order q")
    return params
