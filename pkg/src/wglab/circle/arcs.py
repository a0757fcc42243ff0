"""Major/minor arc classification on the circle R/Z."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .._num import fraction_str, to_fraction
from ..errors import OverlapError


@dataclass(frozen=True)
class ArcPoint:
    alpha: Fraction
    major: bool
    q: int | None
    a: int | None
    Q: int
    T: float

    @property
    def label(self) -> str:
        return "major" if self.major else "minor"

    def to_dict(self) -> dict:
        return {"alpha": fraction_str(self.alpha), "class": self.label,
                "q": self.q, "a": self.a, "Q": self.Q, "T": self.T}


def convergents(alpha: Fraction):
    """Continued-fraction convergents p/q of a rational alpha, in order."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = alpha
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _check(Q, T) -> tuple[int, Fraction]:
    Tf = to_fraction(T) if not isinstance(T, float) else Fraction(T)
    Qf = to_fraction(Q) if not isinstance(Q, float) else Fraction(Q)
    if Tf <= 2 * Qf * Qf:
        raise OverlapError(f"T={float(Tf):.6g} <= 2Q^2={float(2 * Qf * Qf):.6g}: major arcs may overlap")
    return math.floor(Qf), Tf


def circle_distance(alpha: Fraction, a: int, q: int) -> Fraction:
    d = (alpha - Fraction(a, q)) % 1
    return min(d, 1 - d)


def classify(alpha, Q, T) -> ArcPoint:
    """Major(q, a) if some coprime a/q with q <= Q has |alpha - a/q| <= 1/T, else minor.

    With T > 2Q^2 such a fraction is unique and, by Legendre's theorem, is a
    convergent of alpha, so scanning convergents with q <= Q is complete.
    """
    Qi, Tf = _check(Q, T)
    alpha = (Fraction(alpha) if isinstance(alpha, float) else to_fraction(alpha)) % 1
    bound = 1 / Tf
    for p, q in convergents(alpha):
        if q > Qi:
            break
        if circle_distance(alpha, p, q) <= bound:
            return ArcPoint(alpha, True, q, p % q, Qi, float(Tf))
    return ArcPoint(alpha, False, None, None, Qi, float(Tf))


def classify_bruteforce(alpha, Q, T) -> ArcPoint:
    """Oracle: try every coprime pair (q, a) with q <= Q."""
    Qi, Tf = _check(Q, T)
    alpha = (Fraction(alpha) if isinstance(alpha, float) else to_fraction(alpha)) % 1
    bound = 1 / Tf
    for q in range(1, Qi + 1):
        for a in range(q):
            if math.gcd(a, q) == 1 and circle_distance(alpha, a, q) <= bound:
                return ArcPoint(alpha, True, q, a, Qi, float(Tf))
    return ArcPoint(alpha, False, None, None, Qi, float(Tf))


def arc_parameters(ctx) -> tuple[float, float]:
    """Q = X^(k(delta+rho)), T = Y / X^rho."""
    return ctx.Q, ctx.T
