import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wglab.arithmetic import primes_in
from wglab.errors import DomainError, RegimeError, RestrictionError, ScaleError
from wglab.search import (
    alpha_minus, count_representations, find_representation, prime_power_indicator, s_bounds, s_min,
    sample_targets, theorem_interval, theta_threshold, threshold_table, weak_regime_condition, wright_gap_demo,
)
from wglab.transfer import convolve


def test_threshold_values():
    assert theta_threshold(2, 7).theta_bound == Fraction(893, 1386)
    assert theta_threshold(3, 13).theta_bound == Fraction(1487, 2574)
    for k in range(4, 12):
        r = theta_threshold(k, k * k + k + 1)
        assert r.theta_bound == Fraction(11, 20) and r.binding_constraint == "alpha_regime"
    assert theta_threshold(2, 7).binding_constraint == "minor_arc"
    assert theta_threshold(2, 7).to_dict()["decimal"] == "0.644300"
    assert [r["k"] for r in threshold_table()] == list(range(2, 9))


def test_threshold_is_consistent_with_s_min():
    """theta_{k,s} is the infimum: s qualifies just above it and fails just below it."""
    for k, s in ((2, 7), (2, 10), (3, 13), (3, 20), (4, 21), (5, 40)):
        th = theta_threshold(k, s).theta_bound
        assert s_min(k, th + Fraction(1, 10 ** 9)) <= s
        below = th - Fraction(1, 10 ** 9)
        if below > Fraction(21, 40):
            assert s_min(k, below) > s


def test_weak_regime_constants():
    for k in range(2, 9):
        c = weak_regime_condition(k)
        assert c["minor_arc_floor"] == 444
        assert c["major_arc"] == Fraction(4000 * (k + 2), 189)
        assert c["major_arc"] == (k + 2) / (Fraction(9, 100) * Fraction(21, 40))


def test_s_min_examples():
    assert s_min(2, Fraction(21, 40) + Fraction(1, 10 ** 9)) == 445
    assert s_min(2, Fraction(9, 10)) == 7
    vals = [s_min(2, Fraction(21, 40) + Fraction(1, 10 ** j)) for j in range(3, 9)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    # with the density held fixed the minor-arc bound diverges as theta approaches 1/2
    seq = [s_bounds(2, Fraction(1, 2) + Fraction(1, 10 ** j), Fraction(99, 100))["minor_arc"] for j in range(1, 8)]
    assert all(a < b for a, b in zip(seq, seq[1:])) and seq[-1] > 10 ** 7
    with pytest.raises(RegimeError):
        s_min(2, Fraction(21, 40))
    with pytest.raises(DomainError):
        s_min(2, Fraction(1, 2))
    with pytest.raises(RestrictionError):
        theta_threshold(2, 6)
    assert alpha_minus(Fraction(11, 20)) == Fraction(9, 100)
    assert set(s_bounds(2, Fraction(9, 10))) == {"minor_arc", "major_arc", "restriction"}


def first_by_bruteforce(n, k, s, lo, hi):
    ps = primes_in(lo, hi).tolist()
    return next((c for c in itertools.combinations_with_replacement(ps, s) if sum(p ** k for p in c) == n), ())


@given(st.integers(2, 5), st.integers(2, 3), st.integers(2, 40), st.integers(0, 30), st.integers(0, 10 ** 6))
def test_search_returns_lexicographically_first(s, k, lo, span, seed):
    hi = lo + span
    ps = primes_in(lo, hi).tolist()
    rng = np.random.default_rng(seed)
    if ps and seed % 2:
        n = sum(int(p) ** k for p in rng.choice(ps, s))  # representable by construction
    else:
        n = int(rng.integers(s * lo ** k, s * hi ** k + 2))
    rec = find_representation(n, k, s, lo, hi)
    assert rec.primes == first_by_bruteforce(n, k, s, lo, hi)
    assert rec.found == bool(rec.primes)


def test_search_examples():
    lo, hi = 100, 200
    p = 151
    rec = find_representation(7 * p ** 2, 2, 7, lo, hi)
    assert rec.found and rec.primes <= (p,) * 7 and sum(v * v for v in rec.primes) == 7 * p ** 2
    assert find_representation(7 * 101 ** 2, 2, 7, lo, hi).primes == (101,) * 7
    assert not find_representation(8 * 10 ** 5 + 6, 2, 7, lo, hi).found  # 6 mod 8 with odd primes
    assert not find_representation(10, 2, 3, 100, 100).found


def test_bigint_fallback():
    lo, hi = 10 ** 10 - 300, 10 ** 10 + 300
    ps = primes_in(lo, hi).tolist()
    chosen = [ps[1], ps[2], ps[2], ps[5], ps[7]]
    n = sum(p * p for p in chosen)
    rec = find_representation(n, 2, 5, lo, hi)
    assert rec.found and rec.method == "meet_in_middle_bigint" and sum(p * p for p in rec.primes) == n
    assert rec.primes == first_by_bruteforce(n, 2, 5, lo, hi)


def test_scale_cap():
    with pytest.raises(ScaleError):
        find_representation(10 ** 12, 2, 8, 2, 40000)


def literal_count(n, k, s, lo, hi):
    ps = primes_in(lo, hi).tolist()
    return sum(1 for c in itertools.product(ps, repeat=s) if sum(p ** k for p in c) == n)


@pytest.mark.parametrize("k,s,lo,hi", [(2, 3, 10, 40), (2, 4, 5, 25), (3, 3, 2, 20), (2, 2, 3, 50)])
def test_counts_match_enumeration_and_convolution(k, s, lo, hi):
    conv = np.rint(convolve([prime_power_indicator(k, lo, hi)] * s)).astype(np.int64)
    for n in list(range(s * lo ** k, s * lo ** k + 200, 7)) + [s * hi ** k, s * 11 ** k]:
        c = count_representations(n, k, s, lo, hi)
        assert c == literal_count(n, k, s, lo, hi)
        if n < conv.size:
            assert c == conv[n]


def test_count_examples():
    assert count_representations(3 * 11 ** 2, 2, 3, 10, 12) == 1
    assert count_representations(3 * 11 ** 2 + 1, 2, 3, 10, 12) == 0


def test_interval_and_targets():
    lo, hi = theorem_interval(2000, Fraction(9, 10), 7)
    xt = 2000 ** 0.9
    assert lo == math.ceil(2000 - xt / 7) and hi == math.floor(2000 + xt)
    ns = sample_targets(2, 7, 2000, 50)
    assert len(ns) == 50 and all(n % 24 == 7 for n in ns)
    assert min(abs(n - 7 * 2000 ** 2) for n in ns) < 24


def test_wright_demo():
    low = wright_gap_demo(2, 4, 50, Fraction(2, 5))
    assert low.non_representable()
    assert any("contrast" in n for n in wright_gap_demo(2, 4, 50, Fraction(9, 10)).notes)
    assert any("scale too small" in n for n in wright_gap_demo(2, 4, 5, Fraction(2, 5), u_range=2).notes)
    for row in low.rows:
        if row["found"]:
            assert sum(p * p for p in row["primes"]) == row["n"]
        else:
            lo, hi = row["interval"]
            assert first_by_bruteforce(row["n"], 2, 4, lo, hi) == ()
