"""Transference-side objects: f_b and nu_b on [N], progression means, convolutions, U^2."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._num import next_pow2, to_fraction
from .arithmetic import euler_phi, powmod_array, primes_in
from .context import WaringContext, with_b
from .errors import DomainError, EmptySupportError, GenerationError, ScaleError
from .sieve import SievePlan, alpha_plus, plan_for_context, rho_plus_range

DENSE_LIMIT = 20_000_000
KINDS = ("f_b", "nu_b")


@dataclass(frozen=True)
class WeightedSequence:
    """A nonnegative function on [N], stored by its support (n ascending)."""

    ctx: WaringContext
    kind: str
    N: int
    normalizer: float
    alpha_plus: float
    support: np.ndarray   # n values, 1 <= n <= N
    weights: np.ndarray   # seq(n) on the support
    roots: np.ndarray     # t with W(m+n)+b = t^k

    @property
    def values(self) -> np.ndarray:
        """Dense array; entry i holds seq(i+1)."""
        if self.N > DENSE_LIMIT:
            raise ScaleError(f"N={self.N} too large for a dense array")
        out = np.zeros(self.N, dtype=np.float64)
        out[self.support - 1] = self.weights
        return out

    def total(self) -> float:
        return float(math.fsum(self.weights.tolist()))

    def value_at(self, n: int) -> float:
        i = np.searchsorted(self.support, n)
        if i < self.support.size and self.support[i] == n:
            return float(self.weights[i])
        return 0.0


def root_residues(W: int, b: int, k: int) -> np.ndarray:
    """z in [0, W) with z^k = b mod W."""
    z = np.arange(W, dtype=np.int64)
    return z[powmod_array(z, k, W) == b % W]


def build_sequence(ctx: WaringContext, plan: SievePlan | None = None, b: int | None = None,
                   kind: str = "f_b", threads: int = 1) -> WeightedSequence:
    """f_b(n) or nu_b(n) = normalizer * [t prime or rho+(t)] when W(m+n) + b = t^k."""
    if kind in ("f", "nu"):
        kind = kind + "_b"
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}")
    if b is not None and b != ctx.b:
        ctx = with_b(ctx, b, allow_nonresidue=True)
    plan = plan_for_context(ctx) if plan is None else plan
    k, W = ctx.k, ctx.W
    sig = ctx.sigma_b
    if sig == 0:
        raise EmptySupportError(f"sigma_W(b) = 0 for W={W}, b={ctx.b}, k={k}")
    t_lo, t_hi = ctx.root_window
    if kind == "nu_b" and t_lo <= plan.D:
        raise DomainError(f"window start {t_lo} must exceed the sieve level D={plan.D}")
    aplus = alpha_plus(ctx, plan)
    logX = math.log(ctx.X)
    normalizer = euler_phi(W) * math.exp((1 - 1 / k) * logX) * logX / (aplus * W * sig)
    parts = []
    for z in root_residues(W, ctx.b, k).tolist():
        first = t_lo + ((z - t_lo) % W)
        if first <= t_hi:
            parts.append(np.arange(first, t_hi + 1, W, dtype=np.int64))
    t = np.sort(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
    if kind == "f_b":
        pr = primes_in(t_lo, t_hi, threads=threads).primes if t.size else t
        keep = np.isin(t, pr)
        w = np.full(int(keep.sum()), normalizer)
    else:
        rho = rho_plus_range(t_lo, t_hi, plan)[t - t_lo] if t.size else t
        if (rho < 0).any():
            raise DomainError("negative sieve weight inside the window")
        keep = rho != 0
        w = normalizer * rho[keep].astype(np.float64)
    t = t[keep]
    if t.size and int(t[-1]) ** k < (1 << 62):
        n = (t ** k - ctx.b) // W - ctx.m
    else:
        n = np.array([(int(v) ** k - ctx.b) // W - ctx.m for v in t.tolist()], dtype=np.int64)
    return WeightedSequence(ctx=ctx, kind=kind, N=ctx.N, normalizer=normalizer, alpha_plus=aplus,
                            support=n.astype(np.int64), weights=w, roots=t)


def _as_sparse(seq) -> tuple[np.ndarray, np.ndarray, int]:
    if isinstance(seq, WeightedSequence):
        return seq.support, seq.weights, seq.N
    arr = np.asarray(seq, dtype=np.float64)
    nz = np.flatnonzero(arr)
    return nz + 1, arr[nz], arr.size


def progression_size(N: int, q: int, a: int, length: int | None = None) -> int:
    """|{a + qj : j >= 0, optionally j < length} intersected with [1, N]|."""
    if a < 1:
        a += ((1 - a) + q - 1) // q * q
    if a > N:
        return 0
    size = (N - a) // q + 1
    return size if length is None else min(size, length)


def mean_over_progression(seq, q: int, a: int, min_frac=0, length: int | None = None) -> float:
    """Average of seq over P = {a, a+q, ...} (first `length` terms if given) within [1, N]."""
    idx, w, N = _as_sparse(seq)
    if q < 1:
        raise DomainError("q must be >= 1")
    start = a
    if start < 1:
        start += ((1 - start) + q - 1) // q * q
    size = progression_size(N, q, a, length)
    if size == 0 or size < to_fraction(min_frac) * N:
        raise DomainError(f"|P| = {size} below min_frac * N")
    last = start + q * (size - 1)
    sel = (idx >= start) & (idx <= last) & ((idx - start) % q == 0)
    return float(math.fsum(w[sel].tolist())) / size


def min_progression_mean(seq, q_max: int, min_frac) -> dict:
    """Minimum of progression means over q <= q_max, all residues, blocks of length >= min_frac N.

    Blocks are taken on a grid of starting points (quarter-length stride) in every class.
    """
    idx, w, N = _as_sparse(seq)
    mf = to_fraction(min_frac)
    L0 = max(1, math.ceil(mf * N))
    best = {"mean": math.inf}
    for q in range(1, q_max + 1):
        for a in range(1, q + 1):
            size = progression_size(N, q, a)
            if size < L0:
                continue
            sel = (idx - a) % q == 0
            j = (idx[sel] - a) // q
            order = np.argsort(j)
            j, ws = j[order], w[sel][order]
            csum = np.concatenate([[0.0], np.cumsum(ws)])
            stride = max(1, L0 // 4)
            starts = np.arange(0, size - L0 + 1, stride, dtype=np.int64)
            lo = np.searchsorted(j, starts)
            hi = np.searchsorted(j, starts + L0)
            means = (csum[hi] - csum[lo]) / L0
            i = int(np.argmin(means))
            if means[i] < best["mean"]:
                best = {"mean": float(means[i]), "q": q, "a": a, "block_start": int(a + q * starts[i]),
                        "length": L0}
    return best


def _fft_len(n: int) -> int:
    return next_pow2(n)


def convolve(seqs, method: str = "fft") -> np.ndarray:
    """s-fold convolution of functions on [N]; input entry i is f(i+1), output entry n is the value at n."""
    arrs = [np.asarray(f, dtype=np.float64) for f in seqs]
    if len(arrs) < 2:
        raise DomainError("need at least two sequences")
    N = arrs[0].size
    if any(a.size != N for a in arrs):
        raise DomainError("all sequences must have the same length N")
    s = len(arrs)
    out_len = s * N + 1
    if method == "direct":
        acc = np.concatenate([[0.0], arrs[0]])
        for a in arrs[1:]:
            acc = np.convolve(acc, np.concatenate([[0.0], a]))
        return acc[:out_len]
    if method != "fft":
        raise DomainError("method must be 'fft' or 'direct'")
    L = _fft_len(out_len)
    spectrum = np.ones(L // 2 + 1, dtype=np.complex128)
    for a in arrs:
        spectrum *= np.fft.rfft(np.concatenate([[0.0], a]), n=L)
    return np.fft.irfft(spectrum, n=L)[:out_len]


def sumset_s_eta(A, B, eta, N: int) -> set:
    """S_eta(A, B) = {n in [2, 2N] : 1_A * 1_B(n) >= eta N} for A, B subsets of [N]."""
    A, B = list(A), list(B)
    for v in A + B:
        if not 1 <= v <= N:
            raise DomainError("A and B must lie in [1, N]")
    e = to_fraction(eta)
    threshold = math.ceil(e * N)  # exact integer comparison, any denominator
    if not A or not B:
        return set(range(2, 2 * N + 1)) if threshold <= 0 else set()
    ia = np.zeros(N)
    ib = np.zeros(N)
    ia[np.asarray(A) - 1] = 1
    ib[np.asarray(B) - 1] = 1
    counts = np.rint(convolve([ia, ib])).astype(np.int64)
    if threshold > counts.max():
        return set()
    return {n for n in range(2, 2 * N + 1) if counts[n] >= threshold}


def _u2_fourth(f: np.ndarray, size: int) -> float:
    fh = np.fft.fft(np.concatenate([f, np.zeros(size - f.size)]))
    return float(np.sum(np.abs(fh) ** 4))


def gowers_u2(f, N: int | None = None, size: int | None = None) -> float:
    """||f||_{U^2[N]} = ||f||_{U^2(Z/N')} / ||1_[N]||_{U^2(Z/N')}, N' the least power of two > 4N."""
    f = np.asarray(f, dtype=np.complex128)
    N = f.size if N is None else N
    if f.size != N:
        raise DomainError("f must have length N")
    size = next_pow2(4 * N + 1) if size is None else size
    if size <= 4 * N:
        raise DomainError("embedding group must exceed 4N")
    num = _u2_fourth(f, size)
    den = _u2_fourth(np.ones(N), size)
    return (num / den) ** 0.25


def gowers_u2_direct(f, size: int) -> float:
    """Oracle: literal E_{x,h1,h2} f(x) conj f(x+h1) conj f(x+h2) f(x+h1+h2) on Z/size, normalized by 1_[N]."""
    def raw(g):
        g = np.concatenate([np.asarray(g, dtype=np.complex128), np.zeros(size - len(g))])
        x = np.arange(size)[:, None]
        h2 = np.arange(size)[None, :]
        total = 0.0 + 0.0j
        for h1 in range(size):
            total += np.sum(g[x] * np.conj(g[(x + h1) % size]) * np.conj(g[(x + h2) % size])
                            * g[(x + h1 + h2) % size])
        return total.real / size ** 3

    return (raw(f) / raw(np.ones(len(f)))) ** 0.25


def min_ap_mean(f: np.ndarray, min_len: int) -> float:
    """Minimum average of f over all arithmetic progressions in [N] with at least min_len terms."""
    N = f.size
    best = math.inf
    q_max = max(1, (N - 1) // max(min_len - 1, 1))
    for q in range(1, q_max + 1):
        for a in range(q):
            g = f[a::q]
            n = g.size
            if n < min_len:
                continue
            c = np.concatenate([[0.0], np.cumsum(g)])
            for L in range(min_len, n + 1):
                m = float(np.min(c[L:] - c[:-L])) / L
                if m < best:
                    best = m
    return best


@dataclass
class PreTransferenceReport:
    s: int
    alphas: tuple
    eps: float
    N: int
    eta: float
    trials: int
    seed: int
    min_ratios: list = field(default_factory=list)
    rejections: int = 0
    failures: list = field(default_factory=list)

    @property
    def all_positive(self) -> bool:
        return len(self.min_ratios) == self.trials and all(r > 0 for r in self.min_ratios)

    def summary(self) -> dict:
        return {"s": self.s, "alphas": list(self.alphas), "eps": self.eps, "N": self.N, "eta": self.eta,
                "trials": self.trials, "seed": self.seed, "all_positive": self.all_positive,
                "min_ratio": min(self.min_ratios) if self.min_ratios else None,
                "rejections": self.rejections, "failures": self.failures}


def window_min_ratio(fs, N: int) -> tuple[float, int]:
    """min over n in [N/2, N] of f_1 * ... * f_s(n) / N^(s-1), and the minimizing n."""
    conv = convolve(fs)
    s = len(fs)
    lo = math.ceil(N / 2)
    seg = conv[lo:N + 1] / float(N) ** (s - 1)
    i = int(np.argmin(seg))
    return float(seg[i]), lo + i


def _random_instance(rng: np.random.Generator, target: float, N: int, min_len: int, tries: int):
    for attempt in range(tries):
        level = target + rng.uniform(0.02, 0.2) * (1 - target)
        amp = rng.uniform(0.0, 0.6)
        f = level + amp * rng.uniform(-1.0, 1.0, N)
        if rng.random() < 0.5:
            freq = rng.uniform(0, 0.5)
            f += 0.5 * amp * np.cos(2 * np.pi * (freq * np.arange(1, N + 1) + rng.random()))
        f = np.clip(f, 0.0, 1.0)
        if min_ap_mean(f, min_len) >= target:
            return f, attempt
    raise GenerationError(f"could not meet AP mean {target} after {tries} tries")


def pre_transference_check(s: int, alphas, eps, N: int, trials: int, seed: int = 0, eta=Fraction(1, 4),
                           tries: int = 200) -> PreTransferenceReport:
    """Random f_i: [N] -> [0,1] with AP means >= alpha_i + eps; report min convolution ratio on [N/2, N]."""
    alphas = tuple(float(a) for a in alphas)
    if len(alphas) != s:
        raise DomainError("need one alpha per summand")
    if sum(alphas) < 1:
        raise DomainError("sum of alphas must be >= 1")
    eps = float(eps)
    eta_f = to_fraction(eta)
    min_len = max(2, math.ceil(eta_f * N))
    rng = np.random.default_rng(seed)
    rep = PreTransferenceReport(s=s, alphas=alphas, eps=eps, N=N, eta=float(eta_f), trials=trials, seed=seed)
    for trial in range(trials):
        fs = []
        for a in alphas:
            f, rej = _random_instance(rng, a + eps, N, min_len, tries)
            rep.rejections += rej
            fs.append(f)
        r, n = window_min_ratio(fs, N)
        rep.min_ratios.append(r)
        if not r > 0:
            rep.failures.append({"trial": trial, "n": n, "ratio": r, "f": [f.tolist() for f in fs]})
    return rep


def adversarial_instance(alphas, N: int) -> list[np.ndarray]:
    """f_i = indicator of [1, alpha_i N]; with sum alpha < 1 the convolution vanishes near N."""
    out = []
    for a in alphas:
        f = np.zeros(N)
        f[: int(math.floor(a * N))] = 1.0
        out.append(f)
    return out
