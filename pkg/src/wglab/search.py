"""Threshold calculator and explicit prime representation search."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from ._num import fraction_str, to_fraction
from .arithmetic import hua_modulus, primes_in
from .errors import DomainError, RegimeError, RestrictionError, ScaleError

# lower prime density constants and the exponent ranges where they are available
STRONG = (Fraction(99, 100), Fraction(11, 20))   # theta > 11/20
WEAK = (Fraction(9, 100), Fraction(21, 40))      # 21/40 < theta <= 11/20
TABLE_MAX = 5_000_000


@dataclass(frozen=True)
class ThresholdResult:
    k: int
    s: int
    binding_constraint: str  # minor_arc | major_arc | alpha_regime
    theta_bound: Fraction
    alpha_minus_used: Fraction

    def to_dict(self) -> dict:
        return {"k": self.k, "s": self.s, "binding_constraint": self.binding_constraint,
                "theta_bound": fraction_str(self.theta_bound), "decimal": f"{float(self.theta_bound):.6f}",
                "alpha_minus_used": fraction_str(self.alpha_minus_used)}


def alpha_minus(theta) -> Fraction:
    """99/100 for theta > 11/20, 9/100 for 21/40 < theta <= 11/20."""
    th = to_fraction(theta)
    if th > STRONG[1]:
        return STRONG[0]
    if th > WEAK[1]:
        return WEAK[0]
    raise RegimeError(f"theta={th} <= 21/40 lies in no lower-density regime")


def s_bounds(k: int, theta, alpha=None) -> dict:
    """The three rational lower bounds for s: minor arc, major arc, restriction."""
    th = to_fraction(theta)
    al = alpha_minus(th) if alpha is None else to_fraction(alpha)
    if th <= Fraction(1, 2):
        raise DomainError("theta must exceed 1/2")
    return {"minor_arc": 2 / (al * (2 * th - 1)), "major_arc": (k + 2) / (al * th),
            "restriction": Fraction(k * k + k)}


def s_min(k: int, theta) -> int:
    """Least integer s strictly above max(2/(a(2theta-1)), (k+2)/(a theta), k^2+k)."""
    th = to_fraction(theta)
    if not (Fraction(1, 2) < th < 1):
        raise DomainError("theta must lie in (1/2, 1)")
    bound = max(s_bounds(k, th).values())
    return math.floor(bound) + 1


def theta_threshold(k: int, s: int) -> ThresholdResult:
    """Infimum of theta for which s exceeds every bound, over both density regimes."""
    if s <= k * k + k:
        raise RestrictionError(f"s={s} <= k^2+k={k * k + k}")
    best = None
    for al, floor in (STRONG, WEAK):
        cands = {
            "minor_arc": Fraction(1, 2) + 1 / (al * s),
            "major_arc": Fraction(k + 2) / (al * s),
            "alpha_regime": floor,
        }
        name = max(cands, key=lambda n: (cands[n], n != "alpha_regime"))
        val = cands[name]
        ceiling = STRONG[1] if al == WEAK[0] else Fraction(1)
        if val >= ceiling:
            continue  # regime admits no theta below its upper end
        if best is None or val < best.theta_bound:
            best = ThresholdResult(k, s, name, val, al)
    if best is None:
        raise RegimeError(f"no theta < 1 admits s={s} for k={k}")
    return best


def weak_regime_condition(k: int) -> dict:
    """Conditions on s for theta slightly above 21/40 in the 9/100 regime."""
    al, th = WEAK
    minor = 2 / (al * (2 * th - 1))
    major = Fraction(k + 2) / (al * th)
    return {"k": k, "restriction": k * k + k, "minor_arc": minor, "minor_arc_floor": math.floor(minor),
            "major_arc": major}


def threshold_table(ks=range(2, 9)) -> list[dict]:
    rows = []
    for k in ks:
        s = {2: 7, 3: 13}.get(k, k * k + k + 1)
        r = theta_threshold(k, s)
        rows.append(r.to_dict())
    return rows


# ---------------------------------------------------------------------------
# representation search


@dataclass
class RepresentationRecord:
    n: int
    k: int
    s: int
    interval: tuple
    primes: tuple
    found: bool
    method: str

    def to_dict(self) -> dict:
        return {"n": str(self.n), "k": self.k, "s": self.s,
                "interval": [str(self.interval[0]), str(self.interval[1])],
                "primes": [str(p) for p in self.primes], "found": self.found, "method": self.method}


def theorem_interval(x: float, theta, s: int) -> tuple[int, int]:
    """Integer window [ceil(x - x^theta/s), floor(x + x^theta)]."""
    th = float(to_fraction(theta))
    xt = x ** th
    return math.ceil(x - xt / s), math.floor(x + xt)


def _verify(n: int, k: int, primes, lo: int, hi: int) -> None:
    from .arithmetic import is_prime
    assert sum(p ** k for p in primes) == n
    assert all(lo <= p <= hi and is_prime(p) for p in primes)


def _multisets(P: int, r: int) -> np.ndarray:
    """All nondecreasing index r-tuples from range(P), lexicographic order."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int32)
    count = math.comb(P + r - 1, r)
    if count > TABLE_MAX:
        raise ScaleError(f"{count} half-sums exceed the table cap {TABLE_MAX}; shrink the window")
    return np.array(list(combinations_with_replacement(range(P), r)), dtype=np.int32).reshape(count, r)


@lru_cache(maxsize=4)
def _half_tables(ps: tuple, k: int, s: int):
    """Right table sorted by (sum, lex) and the lexicographic left tails, for one prime window."""
    P = len(ps)
    c, r = (s + 1) // 2, s // 2
    pw = np.array([p ** k for p in ps], dtype=np.int64)
    right = _multisets(P, r)
    rsum = pw[right].sum(axis=1)
    order = np.lexsort(tuple(right[:, i] for i in range(r - 1, -1, -1)) + (rsum,))
    right, rsum = right[order], rsum[order]
    tail = _multisets(P, c - 1)
    if c > 1:
        tail_first, tail_sum, tail_last = tail[:, 0], pw[tail].sum(axis=1), tail[:, -1]
    else:
        tail_first = tail_sum = tail_last = None
    return pw, right, rsum, right[:, 0], tail, tail_first, tail_sum, tail_last


def find_representation(n: int, k: int, s: int, lo: int, hi: int, primes=None) -> RepresentationRecord:
    """Lexicographically first p_1 <= ... <= p_s in [lo, hi] with sum p_i^k = n (meet in the middle)."""
    if s < 2:
        raise DomainError("s must be >= 2")
    ps = primes_in(max(lo, 2), hi).tolist() if primes is None else sorted(primes)
    P = len(ps)
    rec = RepresentationRecord(n, k, s, (lo, hi), (), False, "meet_in_middle")
    if P == 0:
        return rec
    if s * ps[-1] ** k >= 1 << 62 or n >= 1 << 62:
        rec.method = "meet_in_middle_bigint"
        return _find_bigint(n, k, s, lo, hi, ps, [p ** k for p in ps], rec)
    pw, right, rsum, rfirst, tail, tail_first, tail_sum, tail_last = _half_tables(tuple(ps), k, s)
    c = (s + 1) // 2
    for i in range(P):
        if c > 1:
            start = int(np.searchsorted(tail_first, i))
            lsum, lmax = pw[i] + tail_sum[start:], tail_last[start:]
        else:
            start, lsum, lmax = 0, pw[i:i + 1], np.array([i])
        target = n - lsum
        a = np.searchsorted(rsum, target, side="left")
        b = np.searchsorted(rsum, target, side="right")
        for h in np.flatnonzero(b > a).tolist():
            # rows a..b-1 share the sum and are lexicographic, so their first index is nondecreasing
            sub = rfirst[a[h]:b[h]]
            pos = int(np.searchsorted(sub, lmax[h]))
            if pos < sub.size:
                lidx = (i,) + (tuple(tail[start + h].tolist()) if c > 1 else ())
                tup = tuple(ps[j] for j in lidx + tuple(right[a[h] + pos].tolist()))
                _verify(n, k, tup, lo, hi)
                rec.primes, rec.found = tup, True
                return rec
    return rec


def _find_bigint(n, k, s, lo, hi, ps, powers, rec):
    """Same search with Python integers (sums beyond 62 bits)."""
    c, r = (s + 1) // 2, s // 2
    table: dict[int, list] = {}
    for R in combinations_with_replacement(range(len(ps)), r):
        table.setdefault(sum(powers[j] for j in R), []).append(R)
    for v in table.values():
        v.sort()
    for L in combinations_with_replacement(range(len(ps)), c):
        cands = table.get(n - sum(powers[j] for j in L))
        if not cands:
            continue
        for R in cands:
            if not R or R[0] >= L[-1]:
                tup = tuple(ps[j] for j in L + R)
                _verify(n, k, tup, lo, hi)
                rec.primes, rec.found = tup, True
                return rec
    return rec


def _ordered_sum_counts(powers: list[int], j: int) -> Counter:
    dist = Counter({0: 1})
    for _ in range(j):
        new = Counter()
        for v, c in dist.items():
            for p in powers:
                new[v + p] += c
        dist = new
    return dist


def count_representations(n: int, k: int, s: int, lo: int, hi: int, primes=None) -> int:
    """Number of ordered s-tuples of primes in [lo, hi] with sum p_i^k = n."""
    ps = primes_in(max(lo, 2), hi).tolist() if primes is None else sorted(primes)
    if len(ps) ** ((s + 1) // 2) > TABLE_MAX:
        raise ScaleError("window too large for an exact count")
    powers = [p ** k for p in ps]
    c, r = (s + 1) // 2, s // 2
    left = _ordered_sum_counts(powers, c)
    right = _ordered_sum_counts(powers, r)
    return sum(cnt * right.get(n - v, 0) for v, cnt in left.items())


def prime_power_indicator(k: int, lo: int, hi: int) -> np.ndarray:
    """Array g with g[v-1] = 1 iff v = p^k for a prime p in [lo, hi] (input format of transfer.convolve)."""
    ps = primes_in(max(lo, 2), hi).tolist()
    top = hi ** k
    g = np.zeros(top, dtype=np.float64)
    for p in ps:
        g[p ** k - 1] = 1.0
    return g


def sample_targets(k: int, s: int, x: int, count: int, modulus: int | None = None) -> list[int]:
    """count integers n = s mod R (R = R_k by default) centred on s x^k, spaced by R."""
    R = hua_modulus(k).value if modulus is None else modulus
    centre = s * x ** k
    base = centre - ((centre - s) % R)
    half = count // 2
    return [base + R * (j - half) for j in range(count)]


@dataclass
class WrightReport:
    k: int
    s: int
    m_base: int
    theta: str
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def non_representable(self, congruent_only: bool = True) -> list[int]:
        return [r["n"] for r in self.rows if not r["found"] and (r["congruent"] or not congruent_only)]

    def to_dict(self) -> dict:
        return {"k": self.k, "s": self.s, "m_base": self.m_base, "theta": self.theta, "rows": self.rows,
                "non_representable_congruent": self.non_representable(), "notes": self.notes}


def wright_gap_demo(k: int, s: int, m_base: int, theta, u_range: int = 20) -> WrightReport:
    """n = s(m^k + k m^(k-1)) + u, searched in [x - x^theta, x + x^theta] with x = (n/s)^(1/k) (c = 1)."""
    th = to_fraction(theta)
    rep = WrightReport(k, s, m_base, fraction_str(th))
    if m_base < 10:
        rep.notes.append("scale too small: m_base < 10, gaps cannot be exhibited meaningfully")
    if th > Fraction(1, 2):
        rep.notes.append("theta > 1/2: contrast run, representations are expected")
    R = hua_modulus(k).value
    base = s * (m_base ** k + k * m_base ** (k - 1))
    for u in range(-u_range, u_range + 1):
        n = base + u
        x = (n / s) ** (1 / k)
        xt = x ** float(th)
        lo, hi = math.ceil(x - xt), math.floor(x + xt)
        rec = find_representation(n, k, s, lo, hi)
        rec.method = "exhaustive" if not rec.found else rec.method
        rep.rows.append({"u": u, "n": n, "congruent": (n - s) % R == 0, "interval": [lo, hi],
                         "found": rec.found, "primes": list(rec.primes)})
    if not rep.non_representable():
        rep.notes.append("no non-representable n = s mod R_k in the sweep")
    return rep
