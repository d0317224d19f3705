"""GF(256) arithmetic and Reed-Solomon coding.

Field: GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D),
generator alpha = 2.  Generator polynomials use consecutive roots starting
at alpha^0, which is the convention QR codes use.
"""

from __future__ import annotations

from .errors import Unrecoverable

_PRIM = 0x11D

EXP = [0] * 512
LOG = [0] * 256

_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= _PRIM
for _i in range(255, 512):
    EXP[_i] = EXP[_i - 255]


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("inverse of 0 in GF(256)")
    return EXP[255 - LOG[a]]


def gf_pow(a: int, n: int) -> int:
    if a == 0:
        return 0 if n else 1
    return EXP[(LOG[a] * n) % 255]


def poly_mul(p: list[int], q: list[int]) -> list[int]:
    """Multiply polynomials (coefficients highest degree first)."""
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] ^= gf_mul(a, b)
    return out


def poly_eval(p: list[int], x: int) -> int:
    """Evaluate polynomial (highest degree first) at x via Horner."""
    y = 0
    for c in p:
        y = gf_mul(y, x) ^ c
    return y


_GEN_CACHE: dict[int, list[int]] = {}


def generator_poly(nsym: int) -> list[int]:
    """Product of (x - alpha^i) for i in 0..nsym-1."""
    if nsym not in _GEN_CACHE:
        g = [1]
        for i in range(nsym):
            g = poly_mul(g, [1, EXP[i]])
        _GEN_CACHE[nsym] = g
    return _GEN_CACHE[nsym]


def rs_encode_block(data: bytes | list[int], nsym: int) -> list[int]:
    """Return the nsym parity bytes for one RS block."""
    gen = generator_poly(nsym)
    rem = list(data) + [0] * nsym
    for i in range(len(data)):
        coef = rem[i]
        if coef == 0:
            continue
        for j in range(1, len(gen)):
            rem[i + j] ^= gf_mul(gen[j], coef)
    return rem[len(data):]


def _syndromes(codeword: list[int], nsym: int) -> list[int]:
    return [poly_eval(codeword, EXP[i]) for i in range(nsym)]


def _berlekamp_massey(synd: list[int]) -> list[int]:
    """Error locator polynomial (lowest degree first)."""
    cur = [1]
    prev = [1]
    deg = 0
    shift = 1
    prev_disc = 1
    for n, s_n in enumerate(synd):
        disc = s_n
        for i in range(1, deg + 1):
            disc ^= gf_mul(cur[i], synd[n - i])
        if disc == 0:
            shift += 1
            continue
        coef = gf_mul(disc, gf_inv(prev_disc))
        updated = cur + [0] * max(0, len(prev) + shift - len(cur))
        for i, p in enumerate(prev):
            updated[i + shift] ^= gf_mul(coef, p)
        if 2 * deg <= n:
            prev = cur
            prev_disc = disc
            deg = n + 1 - deg
            shift = 1
        else:
            shift += 1
        cur = updated
    return cur[:deg + 1]


def rs_correct_block(codeword: list[int], nsym: int) -> list[int]:
    """Correct a full RS block (data + parity) in place, return corrected copy.

    Raises Unrecoverable when the error count exceeds floor(nsym / 2) or the
    locator polynomial is inconsistent with its root count.
    """
    synd = _syndromes(codeword, nsym)
    if max(synd) == 0:
        return list(codeword)

    locator = _berlekamp_massey(synd)
    nerr = len(locator) - 1
    if nerr * 2 > nsym:
        raise Unrecoverable(f"error locator degree {nerr} exceeds capacity {nsym // 2}")

    # Chien search over codeword positions; position i has weight n-1-i.
    n = len(codeword)
    positions = []
    for i in range(n):
        x_inv = EXP[(255 - (n - 1 - i)) % 255]
        acc = 0
        for k, ck in enumerate(locator):
            acc ^= gf_mul(ck, gf_pow(x_inv, k))
        if acc == 0:
            positions.append(i)
    if len(positions) != nerr:
        raise Unrecoverable("error locator roots do not match its degree")

    # Forney: omega = (synd * locator) mod x^nsym, lowest degree first.
    omega = [0] * nsym
    for i in range(nsym):
        acc = synd[i]
        for j in range(1, min(i, len(locator) - 1) + 1):
            acc ^= gf_mul(locator[j], synd[i - j])
        omega[i] = acc

    out = list(codeword)
    for i in positions:
        x = EXP[(n - 1 - i) % 255]          # locator root is 1/x
        x_inv = gf_inv(x)
        om = 0
        for k in range(nsym):
            om ^= gf_mul(omega[k], gf_pow(x_inv, k))
        dp = 0
        for k in range(1, len(locator), 2):
            dp ^= gf_mul(locator[k], gf_pow(x_inv, k - 1))
        if dp == 0:
            raise Unrecoverable("Forney derivative vanished")
        # first consecutive root alpha^0 gives magnitude x * omega(1/x) / lambda'(1/x)
        mag = gf_mul(x, gf_mul(om, gf_inv(dp)))
        out[i] ^= mag

    if max(_syndromes(out, nsym)) != 0:
        raise Unrecoverable("correction did not zero the syndromes")
    return out
