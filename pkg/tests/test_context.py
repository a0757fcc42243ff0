import math
from fractions import Fraction

import mpmath
import pytest

from wglab.context import WaringContext, build_context, default_w, with_b
from wglab.errors import DomainError, ScaleError


def oracle_m_N(k, s, theta, W, x):
    """m and N recomputed in 60-digit floating point."""
    with mpmath.workdps(60):
        x = mpmath.mpf(x)
        xt = x ** (mpmath.mpf(theta.numerator) / theta.denominator)
        lo = (x - xt / s) ** k
        hi = (x + xt - W) ** k
        return int(mpmath.floor(lo / W)), int(mpmath.floor((hi - lo) / W))


@pytest.mark.parametrize("k,s,theta,eta,x", [
    (2, 7, Fraction(9, 10), Fraction(1), 10 ** 6),
    (2, 7, Fraction(3, 5), Fraction(1), 10 ** 5),
    (2, 7, Fraction(9, 10), Fraction(1, 3), 10 ** 6),
    (3, 13, Fraction(9, 10), Fraction(1), 10 ** 5),
    (2, 7, Fraction(9, 10), Fraction(1), 100),
])
def test_m_and_N_match_high_precision_oracle(k, s, theta, eta, x):
    ctx = build_context(k, s, theta, eta, x)
    m, N = oracle_m_N(k, s, theta, ctx.W, x)
    assert (ctx.m, ctx.N) == (m, N)
    assert ctx.X == ctx.W * ctx.m + ctx.b and ctx.Y == ctx.W * ctx.N
    assert abs(ctx.relation_ratio - 1) <= ctx.epsilon


def test_desk_context_values():
    ctx = build_context(2, 7, 0.9, 1, 10 ** 6)
    assert (ctx.W, ctx.N, ctx.sieve_level) == (8, 79491689687, 265)
    assert build_context(2, 7, Fraction(9, 10), Fraction(1, 3), 10 ** 6).W == 288
    small = build_context(2, 7, 0.6, 1, 10 ** 5)
    assert (small.N, small.sieve_level) == (28491885, 7)


def test_modulus_examples():
    assert build_context(2, 7, 0.9, 1, 10 ** 6, w_override=1).W == 8
    ctx = build_context(2, 7, 0.9, Fraction(1, 2), 10 ** 6, w_override=2)
    assert ctx.c_eta == 4 and ctx.W == 64


def test_sieve_level_is_exact_floor():
    ctx = build_context(2, 7, 0.9, 1, 10 ** 6)
    D = ctx.sieve_level
    p, q = ctx.delta.numerator, ctx.delta.denominator
    assert D ** q <= ctx.X ** p < (D + 1) ** q


def test_domain_errors():
    with pytest.raises(DomainError):
        build_context(2, 7, 0.45, 1, 10 ** 6)
    with pytest.raises(DomainError):
        build_context(2, 7, 0.9, 0, 10 ** 6)
    with pytest.raises(DomainError):
        build_context(1, 7, 0.9, 1, 10 ** 6)
    with pytest.raises(ScaleError):
        build_context(2, 7, 0.9, 1, 5)


def test_json_round_trip_and_hash_stability():
    ctx = build_context(3, 13, Fraction(9, 10), 1, 10 ** 5)
    back = WaringContext.from_json(ctx.to_json())
    assert back == ctx and back.hash == ctx.hash
    assert build_context(3, 13, Fraction(9, 10), 1, 10 ** 5).hash == ctx.hash
    assert build_context(3, 13, Fraction(9, 10), 1, 10 ** 5 + 1).hash != ctx.hash


def test_with_b_and_nonresidues():
    ctx = build_context(2, 7, 0.9, 1, 10 ** 6)
    assert ctx.sigma_b == 4
    with pytest.raises(DomainError):
        with_b(ctx, 3)
    other = with_b(ctx, 3, allow_nonresidue=True)
    assert other.sigma_b == 0 and other.X == ctx.W * ctx.m + 3


def test_default_w_grows_slowly():
    for x, k in ((10 ** 6, 2), (10 ** 5, 3), (10 ** 100, 2)):
        want = math.floor(math.log(math.log(math.log(float(x) ** k))))
        assert default_w(Fraction(x), k) == want
    assert default_w(Fraction(10 ** 6), 2) == 1
