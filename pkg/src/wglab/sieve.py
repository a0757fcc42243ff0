"""Linear (beta = 2) upper-bound sieve: the set D+, weights rho+, normalizer alpha+."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arithmetic import euler_phi, factorize, is_prime, small_primes
from .errors import DegeneratePlanError, DomainError

EAGER_LIMIT = 10 ** 6


def dplus_member(d_factors, D: int) -> bool:
    """d = p_1 p_2 ... p_j (p_1 > ... > p_j, all < D) is in D+ iff p_1...p_m p_m^2 < D for odd m."""
    fs = [int(p) for p in d_factors]
    for p in fs:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if p >= D:
            raise DomainError(f"prime factor {p} is not below D={D}")
    if any(a <= b for a, b in zip(fs, fs[1:])):
        raise DomainError("prime factors must be strictly decreasing")
    prod = 1
    for i, p in enumerate(fs):
        prod *= p
        if i % 2 == 0 and prod * p * p >= D:
            return False
    return True


def _enumerate_dplus(D: int) -> list[tuple[int, tuple]]:
    """All (d, factors) with d in D+, via depth-first search over decreasing primes."""
    primes = small_primes(max(D - 1, 1)).tolist()
    primes = [p for p in primes if p < D]
    out = [(1, ())]

    def rec(prod: int, limit_idx: int, depth: int, facs: tuple):
        # choose the next prime strictly below primes[limit_idx]
        odd = depth % 2 == 0  # next position index depth+1 is odd when depth is even
        for i in range(limit_idx - 1, -1, -1):
            p = primes[i]
            if odd and prod * p ** 3 >= D:
                continue
            nf = facs + (p,)
            out.append((prod * p, nf))
            rec(prod * p, i, depth + 1, nf)

    rec(1, len(primes), 0, ())
    out.sort()
    return out


@dataclass(frozen=True)
class SievePlan:
    D: int
    dplus: tuple          # sorted d values
    factors: tuple        # factor tuples (decreasing primes), aligned with dplus
    mu: tuple             # Moebius values, aligned with dplus
    delta: Fraction | None = None

    @property
    def hash(self) -> str:
        blob = json.dumps({"D": self.D, "delta": str(self.delta), "size": len(self.dplus)}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def __contains__(self, d: int) -> bool:
        i = np.searchsorted(self._arr, d)
        return i < len(self.dplus) and self.dplus[i] == d

    @property
    def _arr(self) -> np.ndarray:
        return np.asarray(self.dplus, dtype=np.int64)


@lru_cache(maxsize=64)
def build_plan(D: int, delta: Fraction | None = None) -> SievePlan:
    """Eagerly enumerate D+ for level D."""
    D = int(D)
    if D < 1:
        raise DegeneratePlanError("D must be >= 1")
    if D > EAGER_LIMIT:
        raise DomainError(f"eager enumeration limited to D <= {EAGER_LIMIT}")
    items = _enumerate_dplus(D)
    return SievePlan(
        D=D,
        dplus=tuple(d for d, _ in items),
        factors=tuple(f for _, f in items),
        mu=tuple(-1 if len(f) % 2 else 1 for _, f in items),
        delta=delta,
    )


def plan_for_context(ctx) -> SievePlan:
    return build_plan(ctx.sieve_level, ctx.delta)


def _rho_from_primes(ps_desc: list[int], D: int) -> int:
    """Sum of mu(d) over d | prod(ps) with d in D+, by DFS in decreasing prime order."""
    total = 1

    def rec(prod: int, start: int, depth: int):
        nonlocal total
        for i in range(start, len(ps_desc)):
            p = ps_desc[i]
            if depth % 2 == 0 and prod * p ** 3 >= D:
                continue
            total += -1 if depth % 2 == 0 else 1
            rec(prod * p, i + 1, depth + 1)

    rec(1, 0, 0)
    return total


def rho_plus(n: int, plan: SievePlan | int) -> int:
    """rho+(n) = sum over d | gcd(n, P(D)), d in D+ of mu(d)."""
    D = plan if isinstance(plan, int) else plan.D
    if n < 1:
        raise DomainError("n must be >= 1")
    ps = sorted((p for p, _ in factorize(n) if p < D), reverse=True)
    return _rho_from_primes(ps, D)


def rho_plus_range(lo: int, hi: int, plan: SievePlan) -> np.ndarray:
    """rho+(n) for n = lo..hi inclusive, by adding mu(d) along multiples of each d in D+."""
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    out = np.zeros(hi - lo + 1, dtype=np.int64)
    for d, mu in zip(plan.dplus, plan.mu):
        start = (-lo) % d
        out[start::d] += mu
    return out


def dplus_sum(plan: SievePlan, coprime_to: int = 1, divisible_by: int = 1) -> Fraction:
    """Exact sum of mu(d)/d over d in D+ with (d, coprime_to) = 1 and divisible_by | d."""
    total = Fraction(0)
    for d, mu in zip(plan.dplus, plan.mu):
        if d % divisible_by == 0 and math.gcd(d, coprime_to) == 1:
            total += Fraction(mu, d)
    return total


def alpha_plus_value(W: int, k: int, X: int, plan: SievePlan) -> float:
    """phi(W)/(kW) log X sum_{d in D+, (d,W)=1} mu(d)/d."""
    if plan.D < 2:
        raise DegeneratePlanError(f"sieve level D={plan.D} < 2")
    s = dplus_sum(plan, coprime_to=W)
    return float(Fraction(euler_phi(W), k * W) * s) * math.log(X)


def alpha_plus(ctx, plan: SievePlan | None = None) -> float:
    plan = plan_for_context(ctx) if plan is None else plan
    return alpha_plus_value(ctx.W, ctx.k, ctx.X, plan)


def sieve_sum_constrained(D: int, a: int, q: int, t: int) -> Fraction:
    """sum over d | P(D), (d, aq/t) = 1, t | d, d in D+ of mu(d)/d (exact)."""
    if t < 1 or q % t:
        raise DomainError(f"t={t} must divide q={q}")
    if any(e > 1 for _, e in factorize(t)):
        raise DomainError(f"t={t} must be squarefree")
    plan = build_plan(D)
    return dplus_sum(plan, coprime_to=a * q // t, divisible_by=t)


def sieve_sum_report(D: int, a: int, q: int, t: int) -> dict:
    """Constrained sum with the diagnostic shape (a/phi(a))/log D."""
    val = sieve_sum_constrained(D, a, q, t)
    shape = (a / euler_phi(a)) / math.log(D)
    return {"D": D, "a": a, "q": q, "t": t, "value": str(val), "float": float(val),
            "shape": shape, "ratio": float(val) / shape}
