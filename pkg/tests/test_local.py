import cmath
import itertools
import math

import pytest
from hypothesis import given, strategies as st

from wglab.errors import NoSolutionError
from wglab.local import (
    choose_b_vector, count_solutions, count_solutions_bruteforce, solvable_guarantee, unit_gauss_sum, units,
)


def enumerate_count(q, m, k, s):
    us = units(q).tolist()
    return sum(1 for ys in itertools.product(us, repeat=s) if sum(pow(y, k, q) for y in ys) % q == m % q)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6, 8, 9, 12, 16, 25])
@pytest.mark.parametrize("k,s", [(2, 3), (3, 2), (4, 3)])
def test_counts_match_tuple_enumeration(q, k, s):
    for m in range(q):
        assert count_solutions(q, m, k, s).count == enumerate_count(q, m, k, s)


@given(st.integers(1, 400), st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(1, 12))
def test_counts_match_residue_dp(q, m, k, s):
    assert count_solutions(q, m, k, s).count == count_solutions_bruteforce(q, m, k, s)


@given(st.integers(2, 5000), st.integers(0, 10 ** 6), st.integers(2, 4))
def test_witness_solves_the_congruence(q, m, k):
    s = 3 * k
    lc = count_solutions(q, m, k, s, want_witness=True)
    if lc.count:
        assert math.gcd(math.prod(lc.witness), q) == 1
        assert sum(pow(y, k, q) for y in lc.witness) % q == m % q
    else:
        assert lc.witness is None


def test_lifting_beyond_direct_limit():
    q = 2 ** 5 * 3 ** 9  # 3^9 exceeds the direct enumeration size
    for m in (6, 7, 1000):
        lc = count_solutions(q, m, 2, 6, want_witness=True)
        lc_small = count_solutions(3 ** 9, m, 2, 6)
        assert lc.count == count_solutions(2 ** 5, m, 2, 6).count * lc_small.count
    big = count_solutions(7 ** 8, 5, 3, 9, want_witness=True)
    assert big.count > 0 and sum(pow(y, 3, 7 ** 8) for y in big.witness) % 7 ** 8 == 5


def test_gauss_sum_examples():
    assert abs(unit_gauss_sum(5, 0, 2) - 4) < 1e-12
    assert abs(unit_gauss_sum(3, 1, 2) - 2 * cmath.exp(2j * cmath.pi / 3)) < 1e-12
    assert abs(unit_gauss_sum(4, 2, 2) + 2) < 1e-12


def test_count_examples():
    assert count_solutions(4, 2, 2, 6).count == 64
    lc = count_solutions(4, 1, 2, 6, want_witness=True)
    assert lc.count == 0 and lc.witness is None


def test_solvable_guarantee_examples():
    assert solvable_guarantee(24, 7, 2, 7)
    assert not solvable_guarantee(24, 6, 2, 7)
    assert all(solvable_guarantee(5, m, 2, 6) for m in range(5))


@given(st.sampled_from([5, 7, 11, 13, 25, 35, 49]), st.integers(0, 10 ** 4), st.integers(2, 3))
def test_guarantee_implies_solutions(q, m, k):
    s = 3 * k
    if solvable_guarantee(q, m, k, s):
        assert count_solutions(q, m, k, s).count > 0


def test_b_vector_examples():
    assert choose_b_vector(8, 7, 2, 7) == (1,) * 7
    assert choose_b_vector(1, 123, 2, 7) == (0,) * 7
    with pytest.raises(NoSolutionError):
        choose_b_vector(24, 13, 2, 7)
    b = choose_b_vector(240, 21, 4, 21)
    assert sum(b) % 240 == 21
