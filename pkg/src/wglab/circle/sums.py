"""Complete sums S_q, V_q, the closed form for V_q, the generating function and nu(b, beta)."""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np

from .._num import csum, expi, frac_mul, iroot, to_fraction
from ..arithmetic import factorize, powmod_array, small_primes, valuation
from ..errors import DomainError, ScaleError
from .arcs import circle_distance

NU_DIRECT_LIMIT = 50_000_000
CHUNK = 1 << 18


def _poly_mod(r: np.ndarray, coeffs: list[int], mod: int) -> np.ndarray:
    """Horner evaluation of sum coeffs[i] r^i mod `mod` (int64, mod < 3e9)."""
    acc = np.zeros_like(r)
    for c in reversed(coeffs):
        acc = (acc * r + c % mod) % mod
    return acc


def complete_sum_S(q: int, a: int, z: int, c: int, k: int, W: int) -> complex:
    """S_q(a,z,c) = sum_{r mod q} e_q(a sum_{i=1}^k C(k,i) W^(i-1) z^(k-i) r^i + c r)."""
    if q < 1:
        raise DomainError("q must be >= 1")
    coeffs = [0] + [math.comb(k, i) * W ** (i - 1) * z ** (k - i) for i in range(1, k + 1)]
    coeffs = [(a * coef) % q for coef in coeffs]
    coeffs[1] = (coeffs[1] + c) % q
    r = np.arange(q, dtype=np.int64)
    return csum(expi(_poly_mod(r, coeffs, q) / q))


def root_set(W: int, b: int, d: int, k: int) -> np.ndarray:
    """z in [W] = {1..W} with (z d)^k = b mod W."""
    z = np.arange(1, W + 1, dtype=np.int64)
    return z[powmod_array(z * (d % W if W > 1 else 0), k, W) == b % W] if W > 1 else z


def complete_sum_V(q: int, a: int, b: int, d: int, c: int, k: int, W: int) -> complex:
    """V_q(a,b,d,c) = sum_{z in [W], (zd)^k = b (W)} sum_{r mod q} e_{Wq}(a (z+Wr)^k + c (z+Wr))."""
    if q < 1 or W < 1:
        raise DomainError("q and W must be >= 1")
    zs = root_set(W, b, d, k)
    if zs.size == 0:
        return 0j
    mod = W * q
    y = (zs[:, None] + W * np.arange(q, dtype=np.int64)[None, :]) % mod
    e = (powmod_array(y, k, mod) * (a % mod) + (c % mod) * y) % mod
    return csum(expi(e.ravel() / mod))


def complete_sum_V_spectrum(q: int, b: int, d: int, c: int, k: int, W: int) -> np.ndarray:
    """V_q(a', b, d, c) for every a' mod Wq at once (c = 0 only), via one DFT of the value histogram."""
    if c % (W * q):
        raise DomainError("spectrum form supports c = 0 only")
    zs = root_set(W, b, d, k)
    mod = W * q
    if zs.size == 0:
        return np.zeros(mod, dtype=np.complex128)
    y = (zs[:, None] + W * np.arange(q, dtype=np.int64)[None, :]) % mod
    hist = np.bincount(powmod_array(y, k, mod).ravel(), minlength=mod).astype(np.float64)
    # sum_v hist[v] e(a v / mod) = mod * ifft(hist)[a]
    return mod * np.fft.ifft(hist)


def psi(q: int, d: int) -> int:
    """prod of p^t over p^t || d with p | q."""
    out = 1
    for p, t in factorize(d):
        if q % p == 0:
            out *= p ** t
    return out


def w_smooth_split(q: int, W: int, w: int) -> tuple[int, int]:
    """q = q1 q2 with q1 w-smooth and (q2, W) = 1; raises if no such split exists."""
    q1 = 1
    for p, e in factorize(q):
        if p <= w:
            q1 *= p ** e
    q2 = q // q1
    if math.gcd(q2, W) != 1:
        raise DomainError(f"q={q} has a prime factor > w={w} dividing W={W}: no w-smooth split")
    return q1, q2


def check_modulus_shape(W: int, k: int, w: int) -> None:
    """Require prod_{p<=w} p | W and p^(2 tau) | W for primes p | gcd(k, W), tau = v_p(k)."""
    for p in small_primes(max(w, 1)).tolist():
        if W % p:
            raise DomainError(f"prime {p} <= w={w} does not divide W={W}")
    for p, _ in factorize(math.gcd(k, W)) if math.gcd(k, W) > 1 else []:
        if W % p ** (2 * valuation(k, p)):
            raise DomainError(f"W={W} lacks p^(2 tau) for p={p} | k={k}")


def xi(q: int, q1: int, k: int, w: int) -> int:
    if q == 1:
        return 1
    return 1 if (k % q1 == 0 and q > w) else 0


def v_q_closed_form(q: int, a: int, b: int, d: int, k: int, W: int, w: int) -> complex:
    """Closed form of V_q(a d^k, b, d, 0):

    xi(q) q1 sum_{r mod q2} e_{q2}(a psi^k inv(q1 W) r^k) sum_{z in [W], (z t)^k = b (W)} chi(z, t)
    with t = (d, q), chi(z,t) = e_{Wq}(a t^k z^k) e_{q2}(-a t^k z^k inv(q1 W)).
    """
    if q < 1 or W < 1:
        raise DomainError("q and W must be >= 1")
    if math.gcd(a, q) != 1 or math.gcd(b, W) != 1 or math.gcd(d, W) != 1:
        raise DomainError("need gcd(a,q) = gcd(b,W) = gcd(d,W) = 1")
    check_modulus_shape(W, k, w)
    q1, q2 = w_smooth_split(q, W, w)
    if xi(q, q1, k, w) == 0:
        return 0j
    t = math.gcd(d, q)
    ps = psi(q, d)
    inv = pow(q1 * W, -1, q2) if q2 > 1 else 0
    r = np.arange(q2, dtype=np.int64)
    coef = (a * pow(ps, k, q2) * inv) % q2 if q2 > 1 else 0
    rsum = csum(expi((powmod_array(r, k, q2) * coef % q2) / q2)) if q2 > 1 else 1.0
    mod = W * q
    zs = root_set(W, b, t, k)
    if zs.size == 0:
        return 0j
    tk = pow(t, k, mod)
    # chi as a single phase over Wq: a t^k z^k (1 - inv q1 W) / (Wq)
    factor = (a * tk * (1 - inv * q1 * W)) % mod
    zk = powmod_array(zs, k, mod)
    zsum = csum(expi((zk * factor % mod) / mod))
    return q1 * rsum * zsum


def _alpha_fraction(alpha) -> Fraction:
    return Fraction(alpha) if isinstance(alpha, float) else to_fraction(alpha)


def _exact_phase_sum(u: np.ndarray, beta: Fraction, weights=None, sign: int = 1) -> complex:
    """sum_j w_j e(sign * u_j * beta) for integer u_j >= 0, with exact reduction of u_j beta mod 1."""
    num, den = beta.numerator % beta.denominator, beta.denominator
    parts = []
    for s in range(0, u.size, CHUNK):
        z = expi(sign * frac_mul(u[s:s + CHUNK], num, den))
        if weights is not None:
            z = z * weights[s:s + CHUNK]
        parts.append(np.sum(z))
    return _compensated(parts)


def _compensated(parts) -> complex:
    """Pairwise-summed chunk totals combined with an error-free final sum."""
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def gen_fn_roots(ctx, b: int, d: int) -> np.ndarray:
    """r in (X^(1/k)/d, (X+Y)^(1/k)/d] with (d r)^k = b mod W."""
    k, W = ctx.k, ctx.W
    lo = -(-(iroot(ctx.X, k) + 1) // d)
    hi = iroot(ctx.X + ctx.Y, k) // d
    parts = []
    for z in root_set(W, b, d, k).tolist():
        z %= W
        first = lo + ((z - lo) % W)
        if first <= hi:
            parts.append(np.arange(first, hi + 1, W, dtype=np.int64))
    return np.sort(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)


def gen_fn(ctx, b: int | None, d: int, alpha) -> complex:
    """f(b,d,alpha) = sum over admissible r of e_W(d^k r^k alpha), evaluated directly."""
    b = ctx.b if b is None else b
    if math.gcd(d, ctx.W) != 1:
        warnings.warn(f"gcd(d, W) = {math.gcd(d, ctx.W)} > 1", stacklevel=2)
    r = gen_fn_roots(ctx, b, d)
    if r.size == 0:
        warnings.warn("empty range for the generating function", stacklevel=2)
        return 0j
    al = _alpha_fraction(alpha) % 1
    k, W = ctx.k, ctx.W
    t = r * d
    if int(t[-1]) ** k < (1 << 62):
        u = (t ** k - b % W) // W
    else:
        u = np.array([(int(v) ** k - b % W) // W for v in t.tolist()], dtype=object)
    # d^k r^k alpha / W = u alpha + b alpha / W with d^k r^k = W u + b
    if u.dtype == object:
        ph = np.array([float((int(x) * al) % 1) for x in u])
        body = csum(expi(ph))
    else:
        body = _exact_phase_sum(u, al)
    return body * complex(np.exp(2j * np.pi * float((Fraction(b % W, W) * al) % 1)))


def H_d(ctx, d: int) -> float:
    """((X+Y)^(1/k) - X^(1/k)) / (d W)."""
    k = ctx.k
    return ((ctx.X + ctx.Y) ** (1 / k) - ctx.X ** (1 / k)) / (d * ctx.W)


def _first_in_class(X: int, b: int, W: int) -> int:
    """Smallest t > X with t = b mod W."""
    return X + 1 + ((b - X - 1) % W)


def smooth_sum_nu(ctx, b: int | None, beta) -> complex:
    """nu(b, beta) = sum_{X < t <= X+Y, t = b (W)} (1/k) t^(1/k - 1) e_W(beta t), summed directly."""
    b = ctx.b if b is None else b
    be = _alpha_fraction(beta)
    if not (Fraction(-1, 2) <= be <= Fraction(1, 2)):
        raise DomainError("beta must lie in [-1/2, 1/2]")
    W, k = ctx.W, ctx.k
    t0 = _first_in_class(ctx.X, b, W)
    count = (ctx.X + ctx.Y - t0) // W + 1 if t0 <= ctx.X + ctx.Y else 0
    if count > NU_DIRECT_LIMIT:
        raise ScaleError(f"{count} terms exceed the direct-sum limit {NU_DIRECT_LIMIT}")
    u0 = (t0 - b % W) // W  # t = W u + b
    num, den = be.numerator % be.denominator, be.denominator
    const = complex(np.exp(2j * np.pi * float((Fraction(b % W, W) * be) % 1)))
    parts = []
    for s in range(0, count, CHUNK):
        u = u0 + np.arange(s, min(s + CHUNK, count), dtype=np.int64)
        wts = (W * u + b % W).astype(np.float64) ** (1.0 / k - 1.0) / k
        parts.append(np.sum(wts * expi(frac_mul(u, num, den))))
    return _compensated(parts) * const


def nu_integral(ctx, beta, d: int = 1) -> complex:
    """(d/W) int_{X^(1/k)/d}^{(X+Y)^(1/k)/d} e_W(beta d^k g^k) dg, via t = (d g)^k and Gauss-Legendre panels.

    Equals (1/(kW)) int_X^{X+Y} t^(1/k-1) e(beta t / W) dt, independent of d.
    """
    be = _alpha_fraction(beta)
    k, W, X, N = ctx.k, ctx.W, ctx.X, ctx.N
    # t = X + W v, v in [0, N]; phase beta t / W = beta X / W + beta v
    panels = max(64, int(math.ceil(8 * abs(float(be)) * N)))
    if panels > 4_000_000:
        raise ScaleError("too many oscillations for the panel quadrature")
    nodes, wts = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(0.0, float(N), panels + 1)
    total = 0j
    bf = float(be)
    for s in range(0, panels, 1 << 16):
        a = edges[s:s + (1 << 16) + 1]
        lo, hi = a[:-1, None], a[1:, None]
        v = 0.5 * (hi - lo) * nodes[None, :] + 0.5 * (hi + lo)
        f = (X + W * v) ** (1.0 / k - 1.0) * np.exp(2j * np.pi * bf * v)
        total += np.sum(0.5 * (hi - lo) * wts[None, :] * f)
    const = complex(np.exp(2j * np.pi * float((be * Fraction(X, W)) % 1)))
    return total * const / k


def geometric_box_sum(N: int, beta: Fraction) -> complex:
    """sum_{n=1}^N e(n beta) in closed form with exact phases."""
    if beta % 1 == 0:
        return complex(N)
    e1 = complex(np.exp(2j * np.pi * float(beta % 1)))
    eN = complex(np.exp(2j * np.pi * float((N * beta) % 1)))
    return e1 * (eN - 1) / (e1 - 1)


def major_arc_terms(ctx, b: int | None, d: int, q: int, a: int, alpha, plan=None) -> dict:
    """Both sides of f(b,d,alpha) ~ V_q(a d^k, b, d, 0)/(q d k) X^(1/k-1) sum_{t = b (W)} e_W(beta t)."""
    b = ctx.b if b is None else b
    W, k = ctx.W, ctx.k
    if math.gcd(d, W) != 1:
        raise DomainError(f"gcd(d, W) = {math.gcd(d, W)} > 1")
    if plan is not None and any(p >= plan.D or e > 1 for p, e in factorize(d)):
        raise DomainError(f"d={d} does not divide P(D) for D={plan.D}")
    al = _alpha_fraction(alpha) % 1
    if q < 1 or math.gcd(a, q) != 1:
        raise DomainError("need q >= 1 and gcd(a, q) = 1")
    if circle_distance(al, a, q) > Fraction(1) / Fraction(ctx.T):
        raise DomainError(f"alpha is not in the major arc around {a}/{q}")
    beta = (al - Fraction(a, q) + Fraction(1, 2)) % 1 - Fraction(1, 2)
    f = gen_fn(ctx, b, d, al)
    V = complete_sum_V(q, a * d ** k, b, d, 0, k, W)
    t0 = _first_in_class(ctx.X, b, W)
    count = (ctx.X + ctx.Y - t0) // W + 1
    # sum_{j=0}^{count-1} e(beta (t0 + W j) / W)
    tsum = complex(np.exp(2j * np.pi * float((beta * Fraction(t0, W)) % 1))) * (
        1 + geometric_box_sum(count - 1, beta) if count > 1 else 1)
    main = V / (q * d * k) * ctx.X ** (1 / k - 1) * tsum
    logX = math.log(ctx.X)
    # the two error components are reported separately as well as summed
    shape_main = math.gcd(q, d) * W ** 2 * math.sqrt(q) * (1 + abs(float(beta)) * ctx.Y / W) * logX
    shape_additive = ctx.Y ** 2 * ctx.X ** (1 / k - 2) / d
    return {"f": f, "main": main, "residual": abs(f - main), "beta": beta, "V": V,
            "shape_main": shape_main, "shape_additive": shape_additive, "shape": shape_main + shape_additive}


def major_arc_residual(ctx, plan, b: int | None, d: int, q: int, a: int, alpha) -> float:
    """|f(b,d,alpha) - V_q(a d^k,b,d,0)/(q d k) X^(1/k-1) sum_{X<t<=X+Y, t=b(W)} e_W(beta t)|."""
    return major_arc_terms(ctx, b, d, q, a, alpha, plan=plan)["residual"]
