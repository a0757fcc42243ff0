"""The W-trick parameter bundle (k, s, theta, W, b, m, X, Y, N, delta, rho)."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, fields, replace
from decimal import ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction

from ._num import fraction_str, iroot, to_fraction
from .arithmetic import kth_power_residues, sigma, small_primes
from .errors import DomainError, ScaleError, WGError

MIN_N = 16
DEFAULT_EPSILON = Fraction(1, 2)
_PREC = 80


def eta_constant(eta: Fraction) -> int:
    """(ceil(1/eta)!)^2."""
    return math.factorial(math.ceil(1 / eta)) ** 2


def delta_ceiling(k: int, theta: Fraction) -> Fraction:
    """min((2 theta - 1)/k, theta/(k(k/2 + 1))); delta must stay strictly below it."""
    return min((2 * theta - 1) / k, theta / (k * (Fraction(k, 2) + 1)))


def default_w(x: Fraction, k: int) -> int:
    """floor(log log log x^k), or 0 where the triple logarithm is undefined or negative."""
    v = k * math.log(float(x))
    for _ in range(2):
        if v <= 0:
            return 0
        v = math.log(v)
    return max(0, int(math.floor(v))) if v > 0 else 0


def w_modulus(k: int, c_eta: int, w: int) -> int:
    prod = 1
    for p in small_primes(max(w, 1)).tolist():
        prod *= p
    return 2 * k * k * c_eta * prod


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _floor(d: Decimal) -> int:
    return int(d.to_integral_value(rounding=ROUND_FLOOR))


@dataclass(frozen=True)
class WaringContext:
    k: int
    s: int
    theta: Fraction
    eta: Fraction
    epsilon: Fraction
    x: Fraction
    w: int
    c_eta: int
    W: int
    b: int
    m: int
    X: int
    N: int
    Y: int
    delta: Fraction
    rho: Fraction

    # derived quantities -------------------------------------------------
    @property
    def sigma_b(self) -> int:
        return sigma(self.W, self.b, self.k)

    @property
    def relation_ratio(self) -> float:
        """Y / ((ks + k)/s * X^(1 - 1/k + theta/k))."""
        k, s = self.k, self.s
        expo = 1 - 1 / k + float(self.theta) / k
        return math.exp(math.log(self.Y) - math.log((k * s + k) / s) - expo * math.log(self.X))

    @property
    def sieve_level(self) -> int:
        """D = floor(X^delta), computed exactly."""
        p, q = self.delta.numerator, self.delta.denominator
        return iroot(self.X ** p, q)

    @property
    def Q(self) -> float:
        return float(self.X) ** (self.k * float(self.delta + self.rho))

    @property
    def T(self) -> float:
        return self.Y / float(self.X) ** float(self.rho)

    @property
    def root_window(self) -> tuple[int, int]:
        """Integers t with X < t^k <= X + Y, as an inclusive range (t_lo, t_hi)."""
        return iroot(self.X, self.k) + 1, iroot(self.X + self.Y, self.k)

    # serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = fraction_str(v) if isinstance(v, Fraction) else str(v)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "WaringContext":
        kw = {}
        for f in fields(cls):
            raw = d[f.name]
            kw[f.name] = Fraction(raw) if f.type in ("Fraction", Fraction) else int(raw)
        ctx = cls(**kw)
        validate(ctx)
        return ctx

    @classmethod
    def from_json(cls, text: str) -> "WaringContext":
        return cls.from_dict(json.loads(text))

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def validate(ctx: WaringContext, allow_nonresidue: bool = False) -> None:
    """Raise if any structural invariant of the bundle fails."""
    if ctx.W != w_modulus(ctx.k, ctx.c_eta, ctx.w):
        raise WGError("W does not match 2 k^2 c_eta prod_{p<=w} p")
    if ctx.c_eta != eta_constant(ctx.eta):
        raise WGError("c_eta does not match eta")
    if ctx.X != ctx.W * ctx.m + ctx.b or ctx.Y != ctx.W * ctx.N:
        raise WGError("X = Wm + b or Y = WN violated")
    if not 1 <= ctx.b < ctx.W or math.gcd(ctx.b, ctx.W) != 1:
        raise DomainError(f"b={ctx.b} must be a unit in [1, W)")
    if not allow_nonresidue and ctx.sigma_b < 1:
        raise DomainError(f"b={ctx.b} is not a k-th power residue mod W={ctx.W}")
    if not (0 < ctx.delta < delta_ceiling(ctx.k, ctx.theta)):
        raise DomainError("delta must lie in (0, min((2theta-1)/k, theta/(k(k/2+1))))")
    if ctx.rho <= 0:
        raise DomainError("rho must be positive")
    r = ctx.relation_ratio
    if not (1 - ctx.epsilon <= r <= 1 + ctx.epsilon):
        raise ScaleError(
            f"Y/((ks+k)/s X^(1-1/k+theta/k)) = {r:.4f} outside [1-eps, 1+eps] with eps={ctx.epsilon}"
        )


def build_context(k: int, s: int, theta, eta, target_x, w_override: int | None = None,
                  b: int | None = None, epsilon=DEFAULT_EPSILON, delta=None, rho=None) -> WaringContext:
    """Build and validate a context for target x.

    m = floor((x - x^theta/s)^k / W), N = floor(((x + x^theta - W)^k - (x - x^theta/s)^k) / W),
    X = Wm + b, Y = WN. b defaults to the smallest unit k-th power residue mod W.
    """
    theta, eta, x, epsilon = map(to_fraction, (theta, eta, target_x, epsilon))
    if not isinstance(k, int) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k}")
    if not isinstance(s, int) or s < 3:
        raise DomainError(f"s must be an integer >= 3, got {s}")
    if not (Fraction(1, 2) < theta < 1):
        raise DomainError(f"theta={theta} outside (1/2, 1)")
    if not (0 < eta <= 1):
        raise DomainError(f"eta={eta} outside (0, 1]")
    if x <= 1:
        raise DomainError("target_x must exceed 1")
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    w = default_w(x, k) if w_override is None else int(w_override)
    if w < 0:
        raise DomainError("w must be nonnegative")
    c_eta = eta_constant(eta)
    W = w_modulus(k, c_eta, w)
    with localcontext() as dc:
        dc.prec = _PREC
        xd = _dec(x)
        xt = xd ** _dec(theta)
        lower = xd - xt / s
        upper = xd + xt - W
        if lower <= 0:
            raise ScaleError("x - x^theta/s must be positive")
        lo_k = lower ** k
        m = _floor(lo_k / W)
        N = _floor((upper ** k - lo_k) / W)
    if N < MIN_N:
        raise ScaleError(f"N={N} < {MIN_N}: target_x too small")
    residues = kth_power_residues(W, k)
    if not residues:
        raise WGError("internal error: no unit k-th power residue mod W")
    if b is None:
        b = residues[0]
    delta = (Fraction(9, 10) * delta_ceiling(k, theta)) if delta is None else to_fraction(delta)
    rho = delta / 10 if rho is None else to_fraction(rho)
    ctx = WaringContext(k=k, s=s, theta=theta, eta=eta, epsilon=epsilon, x=x, w=w, c_eta=c_eta,
                        W=W, b=int(b), m=m, X=W * m + int(b), N=N, Y=W * N, delta=delta, rho=rho)
    validate(ctx)
    return ctx


def with_b(ctx: WaringContext, b: int, allow_nonresidue: bool = False) -> WaringContext:
    """Same context with residue b (X shifts accordingly). sigma_W(b) = 0 is allowed only on request."""
    new = replace(ctx, b=int(b), X=ctx.W * ctx.m + int(b))
    validate(new, allow_nonresidue=allow_nonresidue)
    return new
