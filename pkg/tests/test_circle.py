import cmath
import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wglab.circle import (
    H_d, box_hat, check_modulus_shape, classify, classify_bruteforce, complete_sum_S, complete_sum_V,
    complete_sum_V_spectrum, convergents, energy_direct, energy_pairs, fourier_grid, gen_fn, gen_fn_roots,
    major_arc_residual, major_arc_terms, moment_norm, moment_report, nu_integral, pseudorandomness_report,
    psi, smooth_sum_nu, sparse_hat, v_q_closed_form, vinogradov_count, vinogradov_count_nested, w_smooth_split,
)
from wglab.context import build_context
from wglab.errors import AliasingError, DomainError, OverlapError
from wglab.sieve import plan_for_context
from wglab.transfer import build_sequence


def e(x):
    return cmath.exp(2j * cmath.pi * x)


# arcs ---------------------------------------------------------------------------

def test_convergents_of_a_known_fraction():
    assert list(convergents(Fraction(43, 19))) == [(2, 1), (7, 3), (9, 4), (43, 19)]


@given(st.fractions(0, 1, max_denominator=10 ** 6), st.integers(1, 30))
def test_classify_matches_bruteforce(alpha, Q):
    T = 2 * Q * Q + 1 + Q
    a, b = classify(alpha, Q, T), classify_bruteforce(alpha, Q, T)
    assert (a.major, a.q, a.a) == (b.major, b.q, b.a)


def test_classify_matches_bruteforce_on_random_grid():
    rng = np.random.default_rng(7)
    M, Q = 1 << 20, 20
    T = 2 * Q * Q + 1
    for j in rng.integers(0, M, size=10 ** 4).tolist():
        a, b = classify(Fraction(j, M), Q, T), classify_bruteforce(Fraction(j, M), Q, T)
        assert (a.major, a.q, a.a) == (b.major, b.q, b.a)


def test_classify_examples_and_overlap():
    pt = classify(Fraction(0), 10, 1000)
    assert pt.major and (pt.q, pt.a) == (1, 0)
    T = 1000
    assert not classify(Fraction(1, 2) + Fraction(2, T), 10, T).major
    assert classify(Fraction(1, 2) + Fraction(1, T), 10, T).major  # boundary belongs to the arc
    assert classify(Fraction(999, 1000), 10, T).major  # wraps around to 0/1
    with pytest.raises(OverlapError):
        classify(Fraction(1, 3), 10, 200)


# complete sums -------------------------------------------------------------------

def literal_S(q, a, z, c, k, W):
    return sum(e(Fraction(a * sum(math.comb(k, i) * W ** (i - 1) * z ** (k - i) * r ** i for i in range(1, k + 1))
                          + c * r, q) % 1) for r in range(q))


def shifted_sum(q, a, z, c, k, W):
    return sum(e(Fraction(a * (z + W * r) ** k + c * (z + W * r), W * q) % 1) for r in range(q))


def literal_V(q, a, b, d, c, k, W):
    zs = [z for z in range(1, W + 1) if pow(z * d, k, W) == b % W] if W > 1 else [1]
    return sum(shifted_sum(q, a, z, c, k, W) for z in zs)


@given(st.integers(1, 12), st.integers(0, 50), st.integers(0, 30), st.integers(0, 20), st.integers(2, 3),
       st.sampled_from([1, 2, 8, 9]))
def test_complete_sums_match_literal(q, a, z, c, k, W):
    S = complete_sum_S(q, a, z, c, k, W)
    assert abs(S) <= q + 1e-9
    assert abs(S - literal_S(q, a, z, c, k, W)) < 1e-9
    assert abs(e(Fraction(a * z ** k + c * z, W * q) % 1) * S - shifted_sum(q, a, z, c, k, W)) < 1e-9
    assert abs(complete_sum_V(q, a, 1, 1, c, k, W) - literal_V(q, a, 1, 1, c, k, W)) < 1e-9


def test_semi_multiplicativity():
    for u in range(1, 11):
        for v in range(1, 11):
            if math.gcd(u, v) > 1:
                continue
            for a, z, c, k, W in ((1, 3, 0, 2, 8), (5, 2, 3, 3, 9), (7, 1, 1, 2, 24)):
                vb, ub = pow(v, -1, u) if u > 1 else 0, pow(u, -1, v) if v > 1 else 0
                lhs = complete_sum_S(u * v, a, z, c, k, W)
                rhs = complete_sum_S(u, a * vb, z, c * vb, k, W) * complete_sum_S(v, a * ub, z, c * ub, k, W)
                assert abs(lhs - rhs) < 1e-9


def test_complete_sum_examples():
    assert complete_sum_S(1, 5, 3, 2, 2, 8) == pytest.approx(1)
    assert complete_sum_S(7, 0, 3, 0, 2, 8) == pytest.approx(7)
    assert complete_sum_V(1, 3, 0, 1, 0, 2, 1) == pytest.approx(1)


@pytest.mark.parametrize("q,b,d,k,W", [(5, 1, 1, 2, 8), (9, 1, 5, 2, 24), (4, 3, 1, 3, 8), (7, 9, 1, 2, 64)])
def test_spectrum_matches_pointwise(q, b, d, k, W):
    spectrum = complete_sum_V_spectrum(q, b, d, 0, k, W)
    for a in range(W * q):
        assert abs(spectrum[a] - complete_sum_V(q, a, b, d, 0, k, W)) < 1e-8


def test_split_helpers():
    assert psi(12, 18) == 18 and psi(5, 18) == 1 and psi(3, 10) == 1
    assert w_smooth_split(45, 8, 3) == (9, 5)
    with pytest.raises(DomainError):
        w_smooth_split(10, 10, 3)
    with pytest.raises(DomainError):
        check_modulus_shape(24, 3, 3)  # 3 | gcd(3, 24) but 9 does not divide 24


@pytest.mark.parametrize("k,W,w", [(2, 8, 1), (2, 24, 3), (2, 64, 2), (3, 8, 2), (3, 64, 2)])
def test_closed_form_matches_complete_sum(k, W, w):
    for q in range(1, 31):
        for d in (1, 3, 5, 7):
            if math.gcd(d, W) > 1:
                continue
            for b in [b for b in range(1, W) if math.gcd(b, W) == 1][:4]:
                for a in [a for a in range(1, q + 1) if math.gcd(a, q) == 1][:5]:
                    try:
                        closed = v_q_closed_form(q, a, b, d, k, W, w)
                    except DomainError:
                        continue
                    ref = complete_sum_V(q, a * d ** k, b, d, 0, k, W)
                    assert abs(closed - ref) <= 1e-9 * max(1, abs(ref))


def test_closed_form_vanishing_cases():
    # q1 = 9 does not divide k = 2
    assert v_q_closed_form(9, 1, 1, 1, 2, 24, 3) == 0
    assert abs(complete_sum_V(9, 1, 1, 1, 0, 2, 24)) < 1e-9
    # 1 < q <= w with q1 | k
    assert v_q_closed_form(2, 1, 1, 1, 2, 8, 2) == 0
    assert abs(complete_sum_V(2, 1, 1, 1, 0, 2, 8)) < 1e-9
    assert v_q_closed_form(1, 1, 1, 1, 2, 8, 1) == pytest.approx(complete_sum_V(1, 1, 1, 1, 0, 2, 8))


# generating functions -------------------------------------------------------------

def test_gen_fn_matches_literal_sum():
    ctx = build_context(2, 7, Fraction(9, 10), 1, 300)
    for d in (1, 3):
        r = gen_fn_roots(ctx, ctx.b, d)
        assert all(ctx.X < (d * v) ** 2 <= ctx.X + ctx.Y and pow(int(d * v), 2, ctx.W) == ctx.b for v in r)
        assert gen_fn(ctx, None, d, 0) == pytest.approx(r.size)
        for alpha in (Fraction(1, 3), Fraction(5, 17), Fraction(123, 1000)):
            want = sum(e(Fraction(int(d * v) ** 2, ctx.W) * alpha % 1) for v in r.tolist())
            assert abs(gen_fn(ctx, None, d, alpha) - want) < 1e-9
        assert H_d(ctx, d) == pytest.approx((math.sqrt(ctx.X + ctx.Y) - math.sqrt(ctx.X)) / (d * ctx.W))


def test_smooth_sum_and_integral():
    ctx = build_context(2, 7, Fraction(9, 10), 1, 100)
    ts = [t for t in range(ctx.X + 1, ctx.X + ctx.Y + 1) if t % ctx.W == ctx.b]
    for beta in (Fraction(0), Fraction(1, 1000), Fraction(-1, 77)):
        want = sum(0.5 * t ** -0.5 * e(beta * Fraction(t, ctx.W) % 1) for t in ts)
        assert abs(smooth_sum_nu(ctx, None, beta) - want) < 1e-9 * len(ts)
    assert smooth_sum_nu(ctx, None, 0).real > 0
    # sum versus integral: difference bounded by the variation of the weight (first-term size)
    assert abs(smooth_sum_nu(ctx, None, 0) - nu_integral(ctx, 0)) < 0.5 * ctx.X ** -0.5
    with pytest.raises(DomainError):
        smooth_sum_nu(ctx, None, Fraction(3, 4))


def test_sum_to_integral_error_shape():
    ctx = build_context(2, 7, Fraction(3, 5), 1, 10 ** 5)
    for beta in (Fraction(0), Fraction(1, 10 ** 7), Fraction(-3, 10 ** 6), Fraction(1, 10 ** 5)):
        gap = abs(smooth_sum_nu(ctx, None, beta) - nu_integral(ctx, beta))
        assert gap <= 10 * (abs(float(beta)) * ctx.Y / ctx.W + 1)
        assert abs(smooth_sum_nu(ctx, None, beta)) <= abs(smooth_sum_nu(ctx, None, 0)) + 1e-9


def test_major_arc_residual_grows_at_most_linearly_in_beta():
    ctx = build_context(2, 7, Fraction(3, 5), 1, 10 ** 5)
    width = Fraction(1) / Fraction(ctx.T)
    betas = [width * Fraction(i, 10) for i in range(11)]
    u = np.array([float(b) * ctx.Y / ctx.W for b in betas])
    r = np.array([major_arc_residual(ctx, None, None, 1, 1, 0, b) for b in betas])
    c1, c0 = np.polyfit(u, r, 1)
    assert np.all(r <= 1.2 * (c0 + c1 * u) + 1e-9)


def test_major_arc_residuals_below_error_shape():
    ctx = build_context(2, 7, Fraction(3, 5), 1, 10 ** 5)
    plan = plan_for_context(ctx)
    for d, q, a in ((1, 1, 0), (1, 3, 1), (3, 1, 0), (1, 5, 2)):
        t = major_arc_terms(ctx, None, d, q, a, Fraction(a, q), plan=plan)
        assert t["residual"] <= t["shape"]
        assert t["shape"] == pytest.approx(t["shape_main"] + t["shape_additive"])
        assert major_arc_residual(ctx, plan, None, d, q, a, Fraction(a, q)) == t["residual"]
    with pytest.raises(DomainError):
        major_arc_terms(ctx, None, 2, 1, 0, 0)
    with pytest.raises(DomainError):
        major_arc_terms(ctx, None, 1, 3, 1, Fraction(1, 2))


# spectral ------------------------------------------------------------------------

def test_fourier_grid_matches_direct_dft():
    rng = np.random.default_rng(0)
    f = rng.random(20)
    M = 64
    fh = fourier_grid(f, M)
    for j in (0, 1, 17, 63):
        want = sum(f[n - 1] * e(-n * j / M) for n in range(1, 21))
        assert abs(fh[j] - want) < 1e-9
    assert fh[0] == pytest.approx(f.sum())
    assert np.allclose(sparse_hat(f, [0, 1, 17, 63], M), fh[[0, 1, 17, 63]])
    assert box_hat(20, 5, M) == pytest.approx(sum(e(-n * 5 / M) for n in range(1, 21)))
    with pytest.raises(AliasingError):
        fourier_grid(f, 20)


@pytest.mark.parametrize("N", [1, 2, 5, 17, 64])
def test_box_energy_closed_form(N):
    ind = np.ones(N)
    assert moment_norm(ind, 4) == pytest.approx((2 * N ** 3 + N) / 3, rel=1e-12)
    assert energy_pairs(ind) == (2 * N ** 3 + N) / 3


def test_moments_of_built_sequences():
    ctx = build_context(2, 7, Fraction(9, 10), 1, 50)
    for kind in ("f_b", "nu_b"):
        seq = build_sequence(ctx, kind=kind)
        assert moment_norm(seq, 2) == pytest.approx(float(np.sum(seq.weights ** 2)), rel=1e-12)
        assert moment_norm(seq, 4) == pytest.approx(energy_direct(seq, 2), rel=1e-9)
        assert energy_pairs(seq) == pytest.approx(energy_direct(seq, 2), rel=1e-12)
        assert moment_norm(seq, 6) == pytest.approx(energy_direct(seq, 3), rel=1e-9)
        rep = moment_report(seq, 4)
        assert rep["relative_gap"] < 1e-9
    with pytest.raises(DomainError):
        moment_norm(np.ones(4), 3)


def test_full_scan_at_small_scale():
    ctx = build_context(2, 7, Fraction(9, 10), 1, 100)
    scan = pseudorandomness_report(ctx)
    summ = scan.summary()
    nu = build_sequence(ctx, kind="nu_b")
    assert summ["full_grid"] and summ["points"] == summ["M"]
    assert summ["alpha0_gap"] == pytest.approx(abs(nu.total() - ctx.N) / ctx.N)
    grid = fourier_grid(nu, summ["M"])
    for j, _, _, _, _, gap in scan.rows[::997]:
        assert gap == pytest.approx(abs(grid[j] - box_hat(ctx.N, j, summ["M"])) / ctx.N, abs=1e-9)
    assert summ["additive_term"] == pytest.approx(float(ctx.X) ** (-float(ctx.rho) / 2))
    major = [r for r in scan.rows if r[2] == "major" and r[3] > 1]
    assert summ["major_q_power_ratio"] == pytest.approx(max(r[5] * math.sqrt(r[3]) for r in major))
    with pytest.raises(AliasingError):
        pseudorandomness_report(ctx, M=2 * ctx.N)


# Vinogradov ------------------------------------------------------------------------

def literal_J(k, t, H):
    xs = list(product(range(1, H + 1), repeat=t))
    return sum(1 for x in xs for y in xs if all(sum(v ** i for v in x) == sum(v ** i for v in y)
                                               for i in range(1, k + 1)))


@pytest.mark.parametrize("k,t,H", [(1, 1, 5), (2, 2, 4), (3, 1, 5), (1, 2, 6), (2, 3, 5), (3, 2, 6)])
def test_vinogradov_counts(k, t, H):
    a = vinogradov_count(k, t, H)
    assert a == vinogradov_count_nested(k, t, H) == literal_J(k, t, H)
    assert a >= H ** t
    if t == 1:
        assert a == H


def test_vinogradov_fixed_values():
    assert vinogradov_count(2, 2, 4) == 28
    assert vinogradov_count(3, 1, 5) == 5
