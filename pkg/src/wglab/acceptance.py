"""The acceptance suite: one function per criterion, shared by `wg verify-all` and the tests."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .arithmetic import is_prime, powmod_array, primes_in
from .circle import (
    complete_sum_V_spectrum,
    energy_direct,
    moment_norm,
    pseudorandomness_report,
    v_q_closed_form,
    vinogradov_count,
    vinogradov_count_nested,
)
from .context import build_context
from .errors import DomainError, WGError
from .local import count_solutions, count_solutions_bruteforce, units
from .search import (
    find_representation,
    prime_power_indicator,
    count_representations,
    sample_targets,
    theorem_interval,
    theta_threshold,
    weak_regime_condition,
)
from .sieve import alpha_plus, build_plan, rho_plus_range
from .transfer import adversarial_instance, build_sequence, convolve, pre_transference_check

PROFILES = ("desk", "quick")


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    budget: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.name} ({self.seconds:.2f}s / {self.budget:.0f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "budget": self.budget, "detail": self.detail}


def _rel(a: complex, b: complex) -> float:
    """Relative gap with unit floor (values are sums of roots of unity or counts)."""
    return abs(a - b) / max(abs(b), 1.0)


# 1 ----------------------------------------------------------------------------

def threshold_table_check(profile: str = "desk") -> tuple[bool, dict]:
    want = {(2, 7): Fraction(893, 1386), (3, 13): Fraction(1487, 2574)}
    for k in range(4, 11):
        want[(k, k * k + k + 1)] = Fraction(11, 20)
    got = {f"{k},{s}": str(theta_threshold(k, s).theta_bound) for k, s in want}
    ok = all(theta_threshold(k, s).theta_bound == v for (k, s), v in want.items())
    weak = []
    for k in range(2, 11):
        c = weak_regime_condition(k)
        exact = Fraction(k + 2) / (Fraction(9, 100) * Fraction(21, 40))
        good = (c["minor_arc_floor"] == 444 and c["major_arc"] == Fraction(4000 * (k + 2), 189) == exact
                and c["restriction"] == k * k + k)
        weak.append(good)
    ok = ok and all(weak)
    return ok, {"thresholds": got, "weak_regime_ok": all(weak)}


# 2 ----------------------------------------------------------------------------

def local_oracle_check(profile: str = "desk") -> tuple[bool, dict]:
    qmax = 60 if profile == "desk" else 24
    bad, cases = [], 0
    for k in (2, 3, 4):
        s = 3 * k
        for q in range(1, qmax + 1):
            for m in range(q):
                cases += 1
                a = count_solutions(q, m, k, s).count
                b = count_solutions_bruteforce(q, m, k, s)
                if a != b:
                    bad.append((k, q, m, a, b))
    return not bad, {"cases": cases, "mismatches": bad[:10]}


# 3 ----------------------------------------------------------------------------

def gauss_identity_check(profile: str = "desk") -> tuple[bool, dict]:
    """Fourier side in 40-digit arithmetic: many counts vanish, so float64 noise on 1e10-sized terms shows up."""
    qmax = 30 if profile == "desk" else 15
    worst, cases = 0.0, 0
    with mpmath.workdps(40):
        roots = {}
        for k in (2, 3):
            for q in range(1, qmax + 1):
                if q not in roots:
                    roots[q] = [mpmath.expjpi(mpmath.mpf(2 * j) / q) for j in range(q)]
                z = roots[q]
                pw = powmod_array(units(q), k, q).tolist()
                S = [mpmath.fsum(z[a * v % q] for v in pw) for a in range(q)]
                for s in (2 * k, 3 * k):
                    Ss = [x ** s for x in S]
                    for m in range(q):
                        rhs = mpmath.fsum(Ss[a] * z[-a * m % q] for a in range(q))
                        lhs = q * count_solutions(q, m, k, s).count
                        worst = max(worst, float(abs(rhs - lhs)) / max(lhs, 1))
                        cases += 1
    return worst <= 1e-6, {"cases": cases, "max_rel_gap": worst}


# 4 ----------------------------------------------------------------------------

def sieve_inequality_check(profile: str = "desk") -> tuple[bool, dict]:
    top = 10 ** 5
    n = np.arange(1, top + 1, dtype=np.int64)
    out = {}
    ok = True
    for D in (10, 50, 100):
        plan = build_plan(D)
        rho = rho_plus_range(1, top, plan)
        rough = np.ones(top, dtype=bool)  # gcd(n, P(D)) = 1
        for p in primes_in(2, D - 1).tolist():
            rough &= n % p != 0
        ge_ind = bool(np.all(rho >= rough.astype(np.int64)))
        nonneg = bool(np.all(rho >= 0))
        ps = primes_in(D + 1, top).primes
        at_primes = bool(np.all(rho[ps - 1] == 1))
        out[f"D={D}"] = {"ge_indicator": ge_ind, "nonnegative": nonneg, "one_at_primes": at_primes,
                  "min": int(rho.min()), "dplus_size": len(plan.dplus)}
        ok = ok and ge_ind and nonneg and at_primes
    return ok, out


# 5 ----------------------------------------------------------------------------

def alpha_plus_check(profile: str = "desk") -> tuple[bool, dict]:
    rows, ok = [], True
    for k in (2, 3):
        for x in (10 ** 5, 10 ** 6):
            ctx = build_context(k, 7 if k == 2 else 13, Fraction(9, 10), 1, x)
            a = alpha_plus(ctx)
            bound = Fraction(21, 10) / (k * ctx.delta)
            good = 0 < a <= bound
            ok = ok and good
            rows.append({"k": k, "x": x, "D": ctx.sieve_level, "alpha_plus": a, "bound": float(bound), "ok": good})
    return ok, {"rows": rows}


# 6 ----------------------------------------------------------------------------

def v_closed_form_check(profile: str = "desk") -> tuple[bool, dict]:
    Ws = (8, 24, 64) if profile == "desk" else (8,)
    qmax = 40 if profile == "desk" else 20
    worst, valid, skipped = 0.0, 0, 0
    for k in (2, 3):
        for W in Ws:
            for w in range(0, 6):
                for q in range(1, qmax + 1):
                    for d in (1, 2, 3, 5):
                        if math.gcd(d, W) != 1:
                            skipped += 1
                            continue
                        for b in range(W):
                            if math.gcd(b, W) != 1:
                                continue
                            spectrum = None
                            for a in range(1, q + 1):
                                if math.gcd(a, q) != 1:
                                    continue
                                try:
                                    closed = v_q_closed_form(q, a, b, d, k, W, w)
                                except DomainError:
                                    skipped += 1
                                    break
                                if spectrum is None:
                                    spectrum = complete_sum_V_spectrum(q, b, d, 0, k, W)
                                ref = spectrum[(a * pow(d, k, W * q)) % (W * q)]
                                worst = max(worst, _rel(closed, ref))
                                valid += 1
    return worst <= 1e-6 and valid > 0, {"valid": valid, "skipped": skipped, "max_rel_gap": worst}


# 7 ----------------------------------------------------------------------------

MOMENT_CONTEXTS = [(2, 7, "9/10", 20), (2, 7, "9/10", 30), (2, 7, "9/10", 50), (2, 7, "9/10", 100),
                   (2, 7, "9/10", 300), (2, 7, "9/10", 600), (2, 7, "3/5", 300), (2, 7, "3/5", 1000),
                   (3, 13, "9/10", 50)]


def built_sequences(max_N: int) -> list:
    out = []
    for k, s, th, x in MOMENT_CONTEXTS:
        ctx = build_context(k, s, Fraction(th), 1, x)
        if ctx.N > max_N:
            continue
        for kind in ("f_b", "nu_b"):
            try:
                out.append(build_sequence(ctx, kind=kind))
            except WGError:
                continue
    return out


def moment_identity_check(profile: str = "desk") -> tuple[bool, dict]:
    worst2, worst4 = 0.0, 0.0
    seqs = built_sequences(10 ** 5 if profile == "desk" else 2 * 10 ** 4)
    for seq in seqs:
        quad = moment_norm(seq, 2)
        direct = math.fsum((seq.weights ** 2).tolist())
        worst2 = max(worst2, abs(quad - direct) / direct)
    small = [s for s in seqs if s.N <= 512]
    for seq in small:
        quad = moment_norm(seq, 4)
        direct = energy_direct(seq, 2)
        worst4 = max(worst4, abs(quad - direct) / direct)
    ok = worst2 <= 1e-9 and worst4 <= 1e-6 and len(seqs) > 0 and len(small) > 0
    return ok, {"sequences": len(seqs), "small_sequences": len(small), "u2_max_rel": worst2, "u4_max_rel": worst4,
                "N_values": sorted({s.N for s in seqs})}


# 8 ----------------------------------------------------------------------------

def convolution_oracle_check(profile: str = "desk", seed: int = 0) -> tuple[bool, dict]:
    rng = np.random.default_rng(seed)
    worst, cases = 0.0, 0
    for N in (1, 2, 7, 64, 200, 256):
        for s in (2, 3, 4):
            for _ in range(3):
                fs = [rng.random(N) * rng.integers(1, 5) for _ in range(s)]
                a = convolve(fs, method="fft")
                b = convolve(fs, method="direct")
                worst = max(worst, float(np.max(np.abs(a - b)) / np.max(np.abs(b))))
                cases += 1
    mismatch = []
    for k, s, lo, hi in ((2, 3, 10, 40), (2, 2, 3, 50), (3, 3, 2, 20), (2, 4, 5, 25)):
        g = prime_power_indicator(k, lo, hi)
        conv = np.rint(convolve([g] * s)).astype(np.int64)
        for n in np.flatnonzero(conv).tolist()[::7] + [s * lo ** k + 1, s * hi ** k]:
            c = count_representations(n, k, s, lo, hi)
            if c != conv[n]:
                mismatch.append((k, s, n, c, int(conv[n])))
    return worst <= 1e-9 and not mismatch, {"cases": cases, "max_rel_gap": worst, "count_mismatches": mismatch}


# 9 ----------------------------------------------------------------------------

def vinogradov_check(profile: str = "desk") -> tuple[bool, dict]:
    bad, rows = [], 0
    for k in (1, 2, 3):
        for t in (1, 2):
            for H in range(1, 7):
                a = vinogradov_count(k, t, H)
                b = vinogradov_count_nested(k, t, H)
                rows += 1
                if a != b or a < H ** t:
                    bad.append((k, t, H, a, b))
    return not bad, {"cases": rows, "failures": bad}


# 10 ---------------------------------------------------------------------------

def representation_check(profile: str = "desk") -> tuple[bool, dict]:
    k, s, x = 2, 7, 2000
    theta = Fraction(9, 10)
    lo, hi = theorem_interval(x, theta, s)
    ns = sample_targets(k, s, x, 50 if profile == "desk" else 10)
    found, missing = 0, []
    for n in ns:
        rec = find_representation(n, k, s, lo, hi)
        if rec.found:
            assert sum(p ** k for p in rec.primes) == n and all(is_prime(p) for p in rec.primes)
            found += 1
        else:
            missing.append(n)
    frac = found / len(ns)
    return frac >= 0.95, {"interval": [lo, hi], "samples": len(ns), "found": found, "fraction": frac,
                          "exceptions": missing, "first": ns[0], "last": ns[-1]}


# 11 ---------------------------------------------------------------------------

def pseudorandomness_check(profile: str = "desk", threads: int = 1) -> tuple[bool, dict]:
    k, s, theta = 2, 7, Fraction(9, 10)
    x = 10 ** 6 if profile == "desk" else 10 ** 5
    pts = 1024 if profile == "desk" else 256
    ctx = build_context(k, s, theta, 1, x)
    scan = pseudorandomness_report(ctx, max_points=pts, threads=threads)
    summ = scan.summary()
    # N grows like x^(k-1+theta): scale x so N roughly doubles
    x2 = int(x * 2 ** (1 / (k - 1 + float(theta))))
    ctx2 = build_context(k, s, theta, 1, x2)
    summ2 = pseudorandomness_report(ctx2, max_points=pts, threads=threads).summary()
    trend = {"N": [summ["N"], summ2["N"]], "sup_minor": [summ["sup_minor"], summ2["sup_minor"]],
             "sup_major_q_gt_1": [summ["sup_major_q_gt_1"], summ2["sup_major_q_gt_1"]],
             "alpha0_gap": [summ["alpha0_gap"], summ2["alpha0_gap"]]}
    ok = (summ["alpha0_gap"] <= 0.5 and summ["sup_minor"] is not None and summ["sup_major_q_gt_1"] is not None)
    return ok, {"scan": summ, "doubling_trend": trend}


# 12 ---------------------------------------------------------------------------

def transference_check(profile: str = "desk", seed: int = 0) -> tuple[bool, dict]:
    trials = 100 if profile == "desk" else 10
    rep = pre_transference_check(3, (Fraction(2, 5), Fraction(7, 20), Fraction(7, 20)), Fraction(1, 20), 256,
                                 trials, seed=seed)
    N = 256
    adv = adversarial_instance((0.3, 0.3, 0.3), N)
    conv = convolve(adv, method="direct")
    lo = math.ceil(N / 2)
    zeros = [n for n in range(lo, N + 1) if conv[n] == 0]
    summ = rep.summary()
    summ.pop("failures")
    ok = rep.all_positive and bool(zeros)
    return ok, {"random": summ, "adversarial_zero_count": len(zeros),
                "adversarial_first_zero": zeros[0] if zeros else None}


CRITERIA = [
    (1, "threshold table", threshold_table_check, 1),
    (2, "local solubility oracle", local_oracle_check, 300),
    (3, "Gauss-sum identity", gauss_identity_check, 60),
    (4, "sieve fundamental inequality", sieve_inequality_check, 60),
    (5, "alpha+ window", alpha_plus_check, 60),
    (6, "V_q closed form", v_closed_form_check, 300),
    (7, "moment identities", moment_identity_check, 120),
    (8, "convolution oracle", convolution_oracle_check, 60),
    (9, "Vinogradov counts", vinogradov_check, 60),
    (10, "desk representation search", representation_check, 600),
    (11, "pseudorandomness normalization", pseudorandomness_check, 900),
    (12, "transference sampler", transference_check, 120),
]


def run_criterion(number: int, profile: str = "desk", **kw) -> CriterionResult:
    num, name, fn, budget = CRITERIA[number - 1]
    t = time.perf_counter()
    try:
        ok, detail = fn(profile, **kw)
    except WGError as e:
        ok, detail = False, {"error": e.kind, "message": str(e)}
    dt = time.perf_counter() - t
    detail["within_budget"] = dt <= budget
    return CriterionResult(num, name, bool(ok) and dt <= budget, dt, budget, detail)


def run_all(profile: str = "desk", only=None, threads: int = 1, seed: int = 0) -> list[CriterionResult]:
    if profile not in PROFILES:
        raise DomainError(f"unknown profile {profile!r}")
    out = []
    for num, _, fn, _ in CRITERIA:
        if only and num not in only:
            continue
        kw = {}
        if num == 11:
            kw["threads"] = threads
        if num in (8, 12):
            kw["seed"] = seed
        out.append(run_criterion(num, profile, **kw))
    return out
