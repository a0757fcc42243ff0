"""Local solubility over units: Gauss sums S(q,a), counts M_m(q), witnesses, b-vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._num import expi
from .arithmetic import crt, eta_any, factorize, hua_modulus, powmod_array, sigma, valuation
from .errors import DomainError, NoSolutionError, WGError

DIRECT_LIMIT = 10 ** 4      # enumerate p^t directly up to this size
WITNESS_DIRECT = 1 << 16    # greedy reachability search up to this size


@dataclass(frozen=True)
class LocalCount:
    q: int
    m: int
    k: int
    s: int
    count: int
    witness: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "q": str(self.q), "m": str(self.m), "k": str(self.k), "s": str(self.s),
            "count": str(self.count),
            "witness": None if self.witness is None else [str(y) for y in self.witness],
        }


def units(q: int) -> np.ndarray:
    z = np.arange(q, dtype=np.int64)
    return z[np.gcd(z, q) == 1] if q > 1 else z


def unit_gauss_sum(q: int, a: int, k: int) -> complex:
    """S(q, a) = sum over units x mod q of e(a x^k / q)."""
    if q < 1:
        raise DomainError("q must be >= 1")
    u = units(q)
    r = (powmod_array(u, k, q) * (a % q)) % q
    return complex(np.sum(expi(r / q)))


def _power_histogram(P: int, k: int) -> list[int]:
    h = np.bincount(powmod_array(units(P), k, P), minlength=P)
    return [int(c) for c in h]


def _cyclic_mul(a: list[int], b: list[int], P: int, nbytes: int) -> list[int]:
    """Exact cyclic product of two count vectors via Kronecker substitution."""
    ia = int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in a), "little")
    ib = a is b and ia or int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in b), "little")
    prod = (ia * ib).to_bytes(nbytes * (2 * P), "little")
    out = [0] * P
    for i in range(2 * P - 1):
        c = int.from_bytes(prod[i * nbytes:(i + 1) * nbytes], "little")
        if c:
            out[i % P] += c
    return out


@lru_cache(maxsize=512)
def direct_distribution(P: int, k: int, s: int) -> tuple:
    """Counts, for every residue r mod P, of unit s-tuples with sum of k-th powers = r."""
    h = _power_histogram(P, k)
    phi = sum(h)
    if s == 0:
        return tuple([1] + [0] * (P - 1))
    nbytes = max(1, ((s * max(phi, 2)).bit_length() + 2 * P.bit_length()) // 8 + 2)
    nbytes = max(nbytes, (phi ** s).bit_length() // 8 + 2)
    result = None
    base = h
    e = s
    while e:
        if e & 1:
            result = base if result is None else _cyclic_mul(result, base, P, nbytes)
        e >>= 1
        if e:
            base = _cyclic_mul(base, base, P, nbytes)
    return tuple(result)


def _prime_power_count(p: int, t: int, m: int, k: int, s: int) -> int:
    eta = eta_any(k, p)
    if t <= eta or p ** t <= DIRECT_LIMIT:
        return direct_distribution(p ** t, k, s)[m % p ** t]
    t0 = eta
    while t0 + 1 < t and p ** (t0 + 1) <= DIRECT_LIMIT:
        t0 += 1
    # p^t M(p^t) = p^s M(p^(t-1)) for t > eta
    return p ** ((s - 1) * (t - t0)) * direct_distribution(p ** t0, k, s)[m % p ** t0]


def _reachable(P: int, k: int, s: int) -> list[np.ndarray]:
    """R[j][r] is True iff r is a sum of j unit k-th powers mod P (j = 0..s)."""
    step = np.zeros(P, dtype=np.float64)
    step[np.unique(powmod_array(units(P), k, P))] = 1.0
    fs = np.fft.rfft(step)
    cur = np.zeros(P, dtype=bool)
    cur[0] = True
    out = [cur]
    for _ in range(s):
        conv = np.fft.irfft(np.fft.rfft(cur.astype(np.float64)) * fs, n=P)
        cur = conv > 0.5
        out.append(cur)
    return out


def _direct_witness(P: int, m: int, k: int, s: int) -> tuple | None:
    """Lexicographically least unit tuple with sum of k-th powers = m mod P."""
    R = _reachable(P, k, s)
    if not R[s][m % P]:
        return None
    u = units(P)
    pw = powmod_array(u, k, P)
    out = []
    target = m % P
    for i in range(s):
        rest = R[s - i - 1]
        ok = np.flatnonzero(rest[(target - pw) % P])
        j = int(ok[0])
        out.append(int(u[j]))
        target = (target - int(pw[j])) % P
    return tuple(out)


def _lift_witness(y: list[int], p: int, j: int, m: int, k: int) -> list[int]:
    """Lift a witness mod p^j to mod p^(j+1) by moving y[0] along y[0] + i p^(j - tau)."""
    tau = valuation(k, p)
    mod = p ** (j + 1)
    rest = sum(pow(v, k, mod) for v in y[1:]) % mod
    u = (m - rest) % mod
    step = p ** max(j - tau, 1)
    for i in range(p ** (tau + 1) + 1):
        cand = (y[0] + i * step) % mod
        if pow(cand, k, mod) == u:
            return [cand] + [v % mod for v in y[1:]]
    raise WGError(f"internal error: lift failed at p={p}, j={j}")


def _prime_power_witness(p: int, t: int, m: int, k: int, s: int) -> tuple | None:
    P = p ** t
    if P <= WITNESS_DIRECT:
        return _direct_witness(P, m, k, s)
    t0 = max(eta_any(k, p), 1)
    while p ** (t0 + 1) <= WITNESS_DIRECT and t0 + 1 < t:
        t0 += 1
    base = _direct_witness(p ** t0, m, k, s)
    if base is None:
        return None
    y = list(base)
    for j in range(t0, t):
        y = _lift_witness(y, p, j, m, k)
    return tuple(y)


def count_solutions(q: int, m: int, k: int, s: int, want_witness: bool = False) -> LocalCount:
    """M_m(q) = #{unit tuples (y_1..y_s) mod q : sum y_i^k = m mod q}."""
    if q < 1 or s < 1 or k < 1:
        raise DomainError("need q >= 1, s >= 1, k >= 1")
    count = 1
    parts = []
    for p, t in factorize(q):
        c = _prime_power_count(p, t, m, k, s)
        count *= c
        parts.append((p, t))
    if q == 1:
        return LocalCount(q, m % 1, k, s, 1, (0,) * s if want_witness else None)
    witness = None
    if want_witness and count > 0:
        per = [_prime_power_witness(p, t, m, k, s) for p, t in parts]
        mods = [p ** t for p, t in parts]
        witness = tuple(crt([w[i] for w in per], mods)[0] for i in range(s))
        assert sum(pow(y, k, q) for y in witness) % q == m % q
    return LocalCount(q, m % q, k, s, count, witness)


def count_solutions_bruteforce(q: int, m: int, k: int, s: int) -> int:
    """Oracle: dynamic programming over residues mod q (no multiplicativity, no lifting)."""
    dist = direct_distribution_dp(q, k, s)
    return dist[m % q]


@lru_cache(maxsize=512)
def direct_distribution_dp(q: int, k: int, s: int) -> tuple:
    pw = [pow(int(y), k, q) for y in units(q)]
    dist = [0] * q
    dist[0] = 1
    for _ in range(s):
        new = [0] * q
        for r, c in enumerate(dist):
            if c:
                for v in pw:
                    new[(r + v) % q] += c
        dist = new
    return tuple(dist)


def solvable_guarantee(q: int, m: int, k: int, s: int) -> bool:
    """True when s >= 3k and m = s mod gcd(q, R_k)."""
    g = math.gcd(q, hua_modulus(k).value)
    return s >= 3 * k and (m - s) % g == 0


def choose_b_vector(W: int, n0: int, k: int, s: int) -> tuple:
    """Unit k-th power residues b_i mod W with sum b_i = n0 mod W (deterministic)."""
    if W == 1:
        return (0,) * s
    if s < 3 * k:
        raise NoSolutionError(f"s={s} < 3k={3 * k}")
    g = math.gcd(W, hua_modulus(k).value)
    if (n0 - s) % g:
        raise NoSolutionError(f"n0 = {n0 % g} mod {g}, but must be = s = {s % g}")
    lc = count_solutions(W, n0 % W, k, s, want_witness=True)
    if lc.count == 0:
        raise NoSolutionError(f"no unit solution of sum y_i^{k} = {n0 % W} mod {W}")
    b = tuple(pow(y, k, W) for y in lc.witness)
    assert sum(b) % W == n0 % W and all(sigma(W, bi, k) >= 1 for bi in b)
    return b
