"""Fourier grids, pseudorandomness scans of nu_b, and even restriction moments."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._num import fraction_str, frac_mul, next_pow2
from ..errors import AliasingError, DomainError, ScaleError
from ..transfer import WeightedSequence, _as_sparse, build_sequence, convolve
from .arcs import classify
from .sums import geometric_box_sum

FULL_SCAN_LIMIT = 1 << 14
BLOCK = 64


def fourier_grid(seq, M: int) -> np.ndarray:
    """f_hat(j/M) = sum_n f(n) e(-n j / M) for j = 0..M-1 (zero-padded FFT)."""
    idx, w, N = _as_sparse(seq)
    if M <= N:
        raise AliasingError(f"M={M} must exceed N={N}")
    if M > 1 << 28:
        raise ScaleError(f"grid size M={M} too large for a dense FFT")
    arr = np.zeros(M, dtype=np.float64)
    arr[idx % M] += w
    return np.fft.fft(arr)


def box_hat(N: int, j: int, M: int) -> complex:
    """1_[N] hat at j/M: sum_{n=1}^N e(-n j / M)."""
    return geometric_box_sum(N, Fraction(-j, M))


def sparse_hat(seq, js, M: int) -> np.ndarray:
    """f_hat(j/M) for the listed j by direct summation over the support, with exact phases."""
    idx, w, _ = _as_sparse(seq)
    out = np.empty(len(js), dtype=np.complex128)
    u = idx.astype(np.int64)
    for i, j in enumerate(js):
        ph = frac_mul(u, int(j) % M, M)
        out[i] = np.sum(w * np.exp(-2j * np.pi * ph))
    return out


def moment_norm(seq, u_even: int, M: int | None = None) -> float:
    """(1/M) sum_j |f_hat(j/M)|^(2t), u = 2t, which equals the t-vs-t additive energy when M > tN."""
    if u_even < 2 or u_even % 2:
        raise DomainError("u must be a positive even integer")
    t = u_even // 2
    _, _, N = _as_sparse(seq)
    if M is None:
        M = max(next_pow2(8 * N), next_pow2(t * N + 1))
    if M <= t * N:
        raise AliasingError(f"M={M} must exceed tN={t * N}")
    fh = fourier_grid(seq, M)
    return float(np.sum(np.abs(fh) ** (2 * t)) / M)


def energy_direct(seq, t: int) -> float:
    """sum_n (f^{*t}(n))^2 with direct (non-FFT) convolution."""
    idx, w, N = _as_sparse(seq)
    f = np.zeros(N)
    f[idx - 1] = w
    if t == 1:
        return float(np.sum(f * f))
    conv = convolve([f] * t, method="direct")
    return float(np.sum(conv * conv))


def energy_pairs(seq) -> float:
    """Additive energy sum_h r(h)^2, r(h) = sum_{a+b=h} f(a) f(b), by hashing support pairs."""
    idx, w, _ = _as_sparse(seq)
    s = (idx[:, None] + idx[None, :]).ravel()
    ww = (w[:, None] * w[None, :]).ravel()
    keys, inv = np.unique(s, return_inverse=True)
    r = np.bincount(inv, weights=ww, minlength=keys.size)
    return float(np.sum(r * r))


def moment_report(seq, u_even: int, M: int | None = None) -> dict:
    t = u_even // 2
    _, _, N = _as_sparse(seq)
    quad = moment_norm(seq, u_even, M)
    direct = energy_direct(seq, t) if (t == 1 or N <= 4096) else None
    return {
        "u": u_even, "N": N,
        "quadrature": quad,
        "direct_energy": direct,
        "relative_gap": None if direct is None else abs(quad - direct) / max(abs(direct), 1e-300),
        "normalized": quad / float(N) ** (u_even - 1),
    }


@dataclass
class ArcScan:
    M: int
    N: int
    Q: float
    T: float
    full: bool
    rows: list = field(default_factory=list)  # (j, alpha, class, q, a, value)
    k: int | None = None
    additive: float | None = None  # X^(-rho/k), the size of the NX^(-eps) type term over N

    def summary(self) -> dict:
        minor = [r[5] for r in self.rows if r[2] == "minor"]
        major = [r for r in self.rows if r[2] == "major" and r[3] and r[3] > 1]
        at0 = next((r[5] for r in self.rows if r[0] == 0), None)
        out = {
            "M": self.M, "N": self.N, "Q": self.Q, "T": self.T, "full_grid": self.full,
            "points": len(self.rows), "minor_points": len(minor), "major_points_q_gt_1": len(major),
            "alpha0_gap": at0,
            "sup_minor": max(minor) if minor else None,
            "sup_major_q_gt_1": max(r[5] for r in major) if major else None,
        }
        # bound diagnostics, reported and never asserted
        if self.k is not None:
            out["major_q_power_ratio"] = max(r[5] * r[3] ** (1 / self.k) for r in major) if major else None
            out["additive_term"] = self.additive
            out["minor_bound_ratio"] = (max(minor) / self.additive) if minor and self.additive else None
        return out


def scan_indices(M: int, Q: float, max_points: int, q_scan: int = 12) -> tuple[list[int], bool]:
    """Grid indices to evaluate: all of them when M is small, else major-arc centres plus a uniform sample."""
    if M <= FULL_SCAN_LIMIT:
        return list(range(M)), True
    js = {0}
    for q in range(1, min(q_scan, int(Q)) + 1):
        for a in range(q):
            if math.gcd(a, q) == 1:
                c = (a * M) // q
                for off in (-1, 0, 1, 2):
                    js.add((c + off) % M)
    # golden-ratio (Kronecker) sequence: evenly spread, not biased toward small denominators
    golden = (math.sqrt(5) - 1) / 2
    js.update(int(M * ((i * golden) % 1.0)) for i in range(1, max_points + 1))
    return sorted(js), False


def scan_sequence(seq: WeightedSequence, M: int, Q: float, T: float, max_points: int = 1024,
                  threads: int = 1) -> ArcScan:
    N = seq.N
    js, full = scan_indices(M, Q, max_points)
    blocks = [js[i:i + BLOCK] for i in range(0, len(js), BLOCK)]

    def work(block):
        vals = sparse_hat(seq, block, M)
        rows = []
        for j, v in zip(block, vals):
            gap = abs(v - box_hat(N, j, M)) / N
            pt = classify(Fraction(j, M), Q, T)
            rows.append((j, Fraction(j, M), pt.label, pt.q, pt.a, float(gap)))
        return rows

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    scan = ArcScan(M=M, N=N, Q=Q, T=T, full=full)
    if isinstance(seq, WeightedSequence):
        scan.k = seq.ctx.k
        scan.additive = float(seq.ctx.X) ** (-float(seq.ctx.rho) / seq.ctx.k)
    for p in parts:  # ordered by frequency index regardless of schedule
        scan.rows.extend(p)
    return scan


def pseudorandomness_report(ctx, plan=None, b: int | None = None, M: int | None = None,
                            max_points: int = 1024, threads: int = 1) -> ArcScan:
    """|nu_b_hat(j/M) - 1_[N]_hat(j/M)| / N with arc classification on the grid j/M."""
    seq = build_sequence(ctx, plan, b, kind="nu_b")
    N = seq.N
    M = next_pow2(8 * N) if M is None else M
    if M < 4 * N:
        raise AliasingError(f"M={M} must be at least 4N={4 * N}")
    return scan_sequence(seq, M, seq.ctx.Q, seq.ctx.T, max_points=max_points, threads=threads)


def scan_rows_csv(scan: ArcScan) -> list[list[str]]:
    out = []
    for j, al, cls, q, a, v in scan.rows:
        out.append([str(j), fraction_str(al), cls, "" if q is None else str(q), "" if a is None else str(a),
                    repr(v)])
    return out
