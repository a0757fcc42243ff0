"""Small exact/numeric helpers used across modules."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi
FSUM_THRESHOLD = 1_000_000


def to_fraction(x) -> Fraction:
    """Convert int/str/Fraction/float to an exact Fraction.

    Floats go through their shortest repr so that 0.9 becomes 9/10 rather
    than the nearest dyadic rational.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def iroot(n: int, k: int) -> int:
    """Floor of the real k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton from above, then fix up
    if r ** k < n:
        r += 1
        while r ** k <= n:
            r *= 2
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def frac_mul(values: np.ndarray, num: int, den: int) -> np.ndarray:
    """Exact fractional parts of values*num/den as float64.

    values must be nonnegative integers. Power-of-two denominators up to 2^64
    use wrapping uint64 products, which are exact modulo den.
    """
    v = np.asarray(values)
    num %= den
    if den & (den - 1) == 0 and den <= 1 << 64:
        prod = v.astype(np.uint64) * np.uint64(num)
        if den == 1 << 64:
            return prod.astype(np.float64) / float(den)
        return (prod & np.uint64(den - 1)).astype(np.float64) / float(den)
    vmax = int(v.max()) if v.size else 0
    if den & (den - 1) == 0 and den <= 1 << 96 and vmax < (1 << 63):
        return _frac_dyadic(v.astype(np.uint64), num, den.bit_length() - 1)
    if vmax < (1 << 63) and den < (1 << 31):
        red = v.astype(np.int64) % den
        return ((red * num) % den).astype(np.float64) / float(den)
    out = np.array([(int(x) * num) % den for x in v.ravel()], dtype=object)
    return (out / den).astype(np.float64).reshape(v.shape)


def _mask_frac(x: np.ndarray, e: int) -> np.ndarray:
    """(x mod 2^e) / 2^e for uint64 x (x already reduced mod 2^64), e <= 64."""
    if e == 64:
        return x.astype(np.float64) / float(1 << 64)
    return (x & np.uint64((1 << e) - 1)).astype(np.float64) / float(1 << e)


def _frac_dyadic(u: np.ndarray, num: int, e: int) -> np.ndarray:
    """frac(u * num / 2^e) for 64 < e <= 96 using 32-bit limbs and wrapping products."""
    nh, nl = num >> 32, num & 0xFFFFFFFF
    uh, ul = u >> np.uint64(32), u & np.uint64(0xFFFFFFFF)
    part1 = _mask_frac(u * np.uint64(nh), e - 32)            # u nh 2^32 / 2^e
    part2 = _mask_frac(uh * np.uint64(nl), e - 32)           # uh nl 2^32 / 2^e
    part3 = (ul * np.uint64(nl)).astype(np.float64) / float(1 << e)
    return (part1 + part2 + part3) % 1.0


def expi(phase: np.ndarray) -> np.ndarray:
    """e(phase) = exp(2 pi i phase) for an array of real phases."""
    return np.exp(1j * TWO_PI * np.asarray(phase, dtype=np.float64))


def csum(z: np.ndarray) -> complex:
    """Sum of complex values, error-free-rounded once the term count is large."""
    z = np.asarray(z)
    if z.size > FSUM_THRESHOLD:
        return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))
    return complex(np.sum(z))


def next_pow2(n: int) -> int:
    return 1 << max(0, (int(n) - 1).bit_length())
