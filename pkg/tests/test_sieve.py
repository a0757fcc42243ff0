import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from wglab.arithmetic import euler_phi, factorize, mobius
from wglab.context import build_context
from wglab.errors import DegeneratePlanError, DomainError
from wglab.sieve import (
    alpha_plus, alpha_plus_value, build_plan, dplus_member, dplus_sum, plan_for_context, rho_plus,
    rho_plus_range, sieve_sum_constrained, sieve_sum_report,
)


def rho_by_definition(n, D):
    ps = [p for p, _ in factorize(n) if p < D]
    total = 0
    for r in range(len(ps) + 1):
        for sub in combinations(sorted(ps, reverse=True), r):
            if dplus_member(sub, D):
                total += (-1) ** r
    return total


def test_membership_examples():
    assert dplus_member([], 10)
    assert dplus_member([2], 10)
    assert not dplus_member([3], 10)
    with pytest.raises(DomainError):
        dplus_member([2, 3], 10)  # not decreasing
    with pytest.raises(DomainError):
        dplus_member([11], 10)


@pytest.mark.parametrize("D", [2, 10, 50, 100, 1000, 5000])
def test_enumeration_matches_membership_filter(D):
    plan = build_plan(D)
    want = []
    for d in range(1, D):
        f = factorize(d)
        if any(e > 1 for _, e in f):
            continue
        ps = sorted((p for p, _ in f), reverse=True)
        if dplus_member(ps, D):
            want.append(d)
    assert list(plan.dplus) == want
    assert all(mu == mobius(d) for d, mu in zip(plan.dplus, plan.mu))


def test_rho_examples():
    assert rho_plus(11, 10) == 1
    assert rho_plus(2, 10) == 0
    assert rho_plus(6, 10) == 0


@given(st.integers(1, 10 ** 9), st.sampled_from([10, 30, 50, 100, 300]))
def test_rho_matches_definition_and_bounds_indicator(n, D):
    r = rho_plus(n, build_plan(D))
    assert r == rho_by_definition(n, D)
    rough = all(p >= D for p, _ in factorize(n))
    assert r >= (1 if rough else 0) and r >= 0


@given(st.integers(1, 10 ** 7), st.integers(0, 500), st.sampled_from([10, 50, 265]))
def test_range_matches_pointwise(lo, span, D):
    plan = build_plan(D)
    arr = rho_plus_range(lo, lo + span, plan)
    assert arr.tolist() == [rho_plus(n, plan) for n in range(lo, lo + span + 1)]


def test_alpha_plus_single_term_and_desk_window():
    plan = build_plan(2)
    assert plan.dplus == (1,)
    X = 10 ** 7
    assert alpha_plus_value(1, 2, X, plan) == pytest.approx(math.log(X) / 2, rel=1e-15)
    with pytest.raises(DegeneratePlanError):
        alpha_plus_value(1, 2, X, build_plan(1))
    for k, s in ((2, 7), (3, 13)):
        ctx = build_context(k, s, Fraction(9, 10), 1, 10 ** 6)
        a = alpha_plus(ctx)
        assert 0 < a <= Fraction(21, 10) / (k * ctx.delta)


def test_alpha_plus_equals_exact_sum():
    ctx = build_context(2, 7, Fraction(9, 10), 1, 10 ** 5)
    plan = plan_for_context(ctx)
    exact = sum(Fraction(m, d) for d, m in zip(plan.dplus, plan.mu) if math.gcd(d, ctx.W) == 1)
    assert dplus_sum(plan, coprime_to=ctx.W) == exact
    want = float(Fraction(euler_phi(ctx.W), 2 * ctx.W) * exact) * math.log(ctx.X)
    assert alpha_plus(ctx, plan) == pytest.approx(want, rel=1e-14)


def test_constrained_sums():
    assert sieve_sum_constrained(10, 1, 2, 2) == Fraction(-1, 2)
    assert sieve_sum_constrained(50, 1, 1, 1) == dplus_sum(build_plan(50))
    assert sieve_sum_constrained(10, 1, 11, 11) == 0
    with pytest.raises(DomainError):
        sieve_sum_constrained(10, 1, 4, 4)
    rep = sieve_sum_report(1000, 6, 5, 5)
    assert rep["value"] == str(sieve_sum_constrained(1000, 6, 5, 5))


def test_plan_hash_stable():
    assert build_plan(265).hash == build_plan(265).hash != build_plan(264).hash
    assert 2 in build_plan(10) and 3 not in build_plan(10)
