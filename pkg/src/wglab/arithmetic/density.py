"""Empirical lower prime density in short intervals and progressions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._num import to_fraction
from ..errors import DomainError
from .core import euler_phi
from .primes import primes_in

RELAXATION = (
    "intervals of length exactly ceil(x^(theta-eps)) on a grid with stride "
    "ceil(length/4); longer intervals are not scanned"
)


@dataclass(frozen=True)
class AlphaMinusEstimate:
    value: float
    x: int
    theta: str
    eps: str
    d_max: int
    length: int
    stride: int
    intervals: int
    witness: dict = field(default_factory=dict)
    relaxation: str = RELAXATION


def alpha_minus_estimate(x, theta, eps, d_max: int) -> AlphaMinusEstimate:
    """min over grid intervals I and (c, d) of phi(d) log(x) #{p = c (d), p in I} / |I|."""
    x = int(x)
    th, ep = to_fraction(theta), to_fraction(eps)
    if x < 1000:
        raise DomainError("alpha_minus_estimate needs x >= 1000")
    if not (0.5 < th < 1):
        raise DomainError("theta must lie in (1/2, 1)")
    if ep <= 0 or th - ep <= 0:
        raise DomainError("eps must be positive and below theta")
    logx = math.log(x)
    if not 1 <= d_max <= logx:
        raise DomainError(f"d_max must lie in [1, log x] = [1, {logx:.3f}]")
    span = int(math.floor(x ** float(th + ep)))
    length = int(math.ceil(x ** float(th - ep)))
    stride = -(-length // 4)
    hi = x + span
    primes = primes_in(x, hi).primes
    starts = np.arange(x, hi - length + 2, stride, dtype=np.int64)
    if starts.size == 0:
        raise DomainError("window shorter than one interval")
    best = math.inf
    witness = {}
    for d in range(1, d_max + 1):
        phi = euler_phi(d)
        for c in range(d):
            if math.gcd(c, d) != 1:
                continue
            sub = primes[primes % d == c] if d > 1 else primes
            counts = np.searchsorted(sub, starts + length, side="left") - np.searchsorted(sub, starts, side="left")
            i = int(np.argmin(counts))
            val = phi * logx * int(counts[i]) / length
            if val < best:
                best = val
                witness = {"start": int(starts[i]), "c": c, "d": d, "count": int(counts[i])}
    return AlphaMinusEstimate(
        value=best, x=x, theta=str(th), eps=str(ep), d_max=d_max,
        length=length, stride=stride, intervals=int(starts.size), witness=witness,
    )
