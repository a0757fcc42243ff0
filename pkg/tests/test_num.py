from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st

from wglab._num import csum, frac_mul, fraction_str, iroot, next_pow2, to_fraction


def test_to_fraction_uses_decimal_reading_of_floats():
    assert to_fraction(0.9) == Fraction(9, 10)
    assert to_fraction("21/40") == Fraction(21, 40)
    assert to_fraction(3) == 3
    assert fraction_str(Fraction(893, 1386)) == "893/1386"
    assert fraction_str(Fraction(4)) == "4"


@given(st.integers(0, 10 ** 40), st.integers(1, 7))
def test_iroot_is_floor_root(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


@given(st.lists(st.integers(0, 2 ** 62), min_size=1, max_size=20),
       st.integers(1, 2 ** 100), st.sampled_from([3, 2 ** 20, 2 ** 31 - 1, 2 ** 40, 2 ** 64, 2 ** 72, 2 ** 96, 10 ** 15]))
def test_frac_mul_matches_exact_fractions(us, num, den):
    num %= den
    got = frac_mul(np.array(us, dtype=np.int64), num, den)
    for u, g in zip(us, got):
        want = float(Fraction(u * num % den, den))
        assert abs(g - want) < 1e-15 or abs(abs(g - want) - 1) < 1e-15


def test_csum_and_next_pow2():
    z = np.exp(2j * np.pi * np.arange(1000) / 1000)
    assert abs(csum(z)) < 1e-12
    assert next_pow2(1) == 1 and next_pow2(5) == 8 and next_pow2(8) == 8
