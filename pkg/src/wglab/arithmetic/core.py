"""Exact modular primitives: factoring, phi, mu, CRT, eta(k,p), R_k, sigma_W."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DomainError


@lru_cache(maxsize=8)
def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit (plain Eratosthenes, used for trial division)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple:
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 7
    # wheel mod 30 style increments (4,2,4,2,4,6,2,6)
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += steps[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as a sorted list of (p, e). factorize(1) == []."""
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    return list(_factor_cached(n))


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def crt(residues, moduli) -> tuple[int, int]:
    """Combine x = r_i mod m_i for pairwise coprime m_i. Returns (x, M)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if g != 1:
            raise DomainError("crt moduli must be pairwise coprime")
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m, m


def valuation(n: int, p: int) -> int:
    """Exponent tau with p^tau || n (n != 0)."""
    if n == 0:
        raise DomainError("valuation of zero")
    t = 0
    while n % p == 0:
        n //= p
        t += 1
    return t


def eta_exponent(k: int, p: int) -> int:
    """Hua exponent: tau+2 if p = 2 and tau > 0, else tau+1, where p^tau || k."""
    if p < 2 or not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if k % (p - 1) != 0:
        raise DomainError(f"(p-1) does not divide k for p={p}, k={k}")
    tau = valuation(k, p)
    return tau + 2 if (p == 2 and tau > 0) else tau + 1


def eta_any(k: int, p: int) -> int:
    """Same exponent formula without the (p-1) | k restriction (lifting bound)."""
    tau = valuation(k, p)
    return tau + 2 if (p == 2 and tau > 0) else tau + 1


@dataclass(frozen=True)
class HuaModulus:
    k: int
    factors: tuple  # ((p, eta), ...)
    value: int


def hua_modulus(k: int) -> HuaModulus:
    """R_k = prod over primes p with (p-1) | k of p^eta(k,p)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    facs = []
    for dvs in _divisors(k):
        p = dvs + 1
        if is_prime(p):
            facs.append((p, eta_exponent(k, p)))
    facs.sort()
    value = 1
    for p, e in facs:
        value *= p ** e
    return HuaModulus(k=k, factors=tuple(facs), value=value)


def _divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** i for d in ds for i in range(e + 1)]
    return sorted(ds)


def divisors(n: int) -> list[int]:
    return _divisors(n)


def powmod_array(base: np.ndarray, k: int, mod: int) -> np.ndarray:
    """Elementwise base**k % mod in int64 (requires mod < 3e9)."""
    if mod >= 3_000_000_000:
        raise DomainError("powmod_array modulus too large for int64 products")
    b = np.asarray(base, dtype=np.int64) % mod
    result = np.ones_like(b) % mod
    while k:
        if k & 1:
            result = result * b % mod
        b = b * b % mod
        k >>= 1
    return result


@lru_cache(maxsize=4096)
def _sigma_prime_power(pe: int, b: int, k: int) -> int:
    z = np.arange(pe, dtype=np.int64)
    return int(np.count_nonzero(powmod_array(z, k, pe) == b % pe))


def sigma(W: int, b: int, k: int) -> int:
    """#{z in [W] : z^k = b mod W}, by CRT over the prime powers of W."""
    if W < 1:
        raise DomainError("W must be >= 1")
    count = 1
    for p, e in factorize(W):
        count *= _sigma_prime_power(p ** e, b % p ** e, k)
        if count == 0:
            return 0
    return count


def sigma_bruteforce(W: int, b: int, k: int) -> int:
    return sum(1 for z in range(1, W + 1) if pow(z, k, W) == b % W)


def kth_power_residues(W: int, k: int, units_only: bool = True) -> list[int]:
    """Sorted residues b mod W with sigma(W, b, k) >= 1."""
    z = np.arange(W, dtype=np.int64)
    if units_only:
        z = z[np.gcd(z, W) == 1] if W > 1 else z
    return sorted(set(powmod_array(z, k, W).tolist())) if W > 1 else [0]
