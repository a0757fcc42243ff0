"""Segmented odd-only Eratosthenes sieve over short intervals, with a binary cache."""

from __future__ import annotations

import hashlib
import json
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DomainError, ScaleError
from .core import small_primes

SIEVE_CEILING = 10 ** 12
SEGMENT = 1 << 21  # odd numbers per segment
MAGIC = b"WGPW1"


@dataclass(frozen=True)
class PrimeWindow:
    lo: int
    hi: int
    primes: np.ndarray  # sorted int64

    def __len__(self):
        return int(self.primes.size)

    def tolist(self):
        return self.primes.tolist()


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi] for odd storage; base holds odd primes <= sqrt(hi)."""
    out = []
    if lo <= 2 <= hi:
        out.append(np.array([2], dtype=np.int64))
    first = lo | 1
    if first < 3:
        first = 3
    if first > hi:
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)
    count = (hi - first) // 2 + 1
    flags = np.ones(count, dtype=bool)
    for p in base.tolist():
        pp = p * p
        if pp > hi:
            break
        start = max(pp, ((first + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start > hi:
            continue
        flags[(start - first) // 2 :: p] = False
    if first == 1:
        flags[0] = False
    out.append(first + 2 * np.flatnonzero(flags).astype(np.int64))
    return np.concatenate(out)


def sieve_range(lo: int, hi: int, threads: int = 1) -> np.ndarray:
    """Sorted primes in [lo, hi]; memory O(sqrt(hi) + (hi - lo))."""
    if hi < lo:
        raise DomainError(f"empty interval: hi={hi} < lo={lo}")
    if hi > SIEVE_CEILING:
        raise ScaleError(f"hi={hi} exceeds tested sieving ceiling {SIEVE_CEILING}")
    lo = max(lo, 2)
    if hi < 2 or lo > hi:
        return np.zeros(0, dtype=np.int64)
    base = small_primes(math.isqrt(hi) + 1)
    base = base[base > 2]
    span = 2 * SEGMENT
    bounds = [(a, min(a + span - 1, hi)) for a in range(lo, hi + 1, span)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda ab: _sieve_segment(ab[0], ab[1], base), bounds))
    else:
        parts = [_sieve_segment(a, b, base) for a, b in bounds]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _varint(n: int) -> bytes:
    out = bytearray()
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def encode_window(win: PrimeWindow) -> bytes:
    """Binary layout: magic, u64 lo, u64 hi, u64 count, LEB128 gaps (first gap from lo)."""
    head = MAGIC + struct.pack("<QQQ", win.lo, win.hi, len(win))
    prev = win.lo
    body = bytearray()
    for p in win.primes.tolist():
        body += _varint(p - prev)
        prev = p
    return head + bytes(body)


def decode_window(data: bytes) -> PrimeWindow:
    if data[:5] != MAGIC:
        raise ValueError("not a WGPW1 prime window file")
    lo, hi, count = struct.unpack("<QQQ", data[5:29])
    primes = np.empty(count, dtype=np.int64)
    pos, prev = 29, lo
    for i in range(count):
        shift = gap = 0
        while True:
            byte = data[pos]
            pos += 1
            gap |= (byte & 0x7F) << shift
            if byte < 0x80:
                break
            shift += 7
        prev += gap
        primes[i] = prev
    return PrimeWindow(lo, hi, primes)


def cache_dir() -> Path | None:
    d = os.environ.get("WG_CACHE_DIR")
    return Path(d) if d else None


def cache_key(lo: int, hi: int) -> str:
    return f"primes_{lo}_{hi}"


_USED_KEYS: list[str] = []


def used_cache_keys() -> list[str]:
    """Cache keys read or written in this process (for run manifests)."""
    return list(dict.fromkeys(_USED_KEYS))


def primes_in(lo: int, hi: int, threads: int = 1, use_cache: bool = True) -> PrimeWindow:
    """Exact list of primes in [lo, hi], cached under WG_CACHE_DIR when set."""
    lo, hi = int(lo), int(hi)
    if hi < lo:
        raise DomainError(f"empty interval: hi={hi} < lo={lo}")
    cdir = cache_dir() if use_cache else None
    if cdir is not None:
        path = cdir / (cache_key(lo, hi) + ".wgpw")
        _USED_KEYS.append(cache_key(lo, hi))
        if path.exists():
            return decode_window(path.read_bytes())
    win = PrimeWindow(lo, hi, sieve_range(lo, hi, threads=threads))
    if cdir is not None:
        cdir.mkdir(parents=True, exist_ok=True)
        blob = encode_window(win)
        path.write_bytes(blob)
        meta = {
            "lo": str(lo),
            "hi": str(hi),
            "count": len(win),
            "sha256": hashlib.sha256(blob).hexdigest(),
            "format": "WGPW1",
        }
        path.with_suffix(".json").write_text(json.dumps(meta, sort_keys=True) + "\n")
    return win
