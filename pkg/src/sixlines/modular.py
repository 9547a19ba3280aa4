"""Elementary modular arithmetic: Jacobi symbols, inverses, CRT, primes.

Everything here works on plain Python integers.  The Jacobi symbol uses
the binary algorithm built on quadratic reciprocity, so it never needs a
factorization and never computes a modular power; ``pow(a, -1, m)`` does
inverses.  Prime enumeration is an odd-only segmented sieve: the segment
size is tunable because the efficient table initialisation wants many
small blocks while long verification sweeps prefer big ones.
"""

from __future__ import annotations

import math
import os
from typing import Iterator

__all__ = [
    "jacobi",
    "mod_inverse",
    "crt_pair",
    "is_prime",
    "primes_in_range",
    "iter_primes",
    "DEFAULT_SEGMENT",
]

DEFAULT_SEGMENT = 1 << 20


def _segment_size() -> int:
    raw = os.environ.get("SIXLINES_SIEVE_SEGMENT")
    if raw is None:
        return DEFAULT_SEGMENT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"SIXLINES_SIEVE_SEGMENT is not an integer: {raw!r}") from exc
    if value < 16:
        raise ValueError("SIXLINES_SIEVE_SEGMENT must be at least 16")
    return value


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0.

    Binary algorithm: strip factors of two with the second supplement
    ((2/n) = -1 iff n = +-3 mod 8) and flip the sign per quadratic
    reciprocity when both arguments are 3 mod 4.  Negative ``a`` is fine,
    the symbol only depends on a mod n.

    >>> jacobi(-1, 7), jacobi(2, 7), jacobi(3, 7), jacobi(5, 7)
    (-1, 1, -1, -1)
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi requires positive odd n, got {n}")
    a %= n
    sign = 1
    while a != 0:
        while a % 4 == 0:
            a //= 4
        if a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        if a == 1 or n == 1:
            return sign
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a, n = n % a, a
    return 0


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m; raises ValueError when gcd(a, m) > 1."""
    try:
        return pow(a, -1, m)
    except ValueError as exc:
        raise ValueError(f"{a} is not invertible modulo {m}") from exc


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue mod m1*m2 that is r1 mod m1 and r2 mod m2.

    The moduli must be coprime (here always 16 and an odd prime).
    """
    if math.gcd(m1, m2) != 1:
        raise ValueError(f"crt_pair needs coprime moduli, got {m1} and {m2}")
    # r1 + m1*t = r2 (mod m2)  =>  t = (r2 - r1)/m1 (mod m2)
    t = ((r2 - r1) * mod_inverse(m1, m2)) % m2
    return (r1 + m1 * t) % (m1 * m2)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3 * 10^24 (ample here)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _simple_sieve(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve (used for sieving base primes)."""
    if limit < 2:
        return []
    out = [2]
    if limit < 3:
        return out
    count = (limit - 3) // 2 + 1  # sieve[i] represents 2*i + 3
    sieve = bytearray([1]) * count
    root = math.isqrt(limit)
    i = 0
    while 2 * i + 3 <= root:
        if sieve[i]:
            p = 2 * i + 3
            start = (p * p - 3) // 2
            sieve[start::p] = bytearray(len(range(start, count, p)))
        i += 1
    out.extend(2 * j + 3 for j, alive in enumerate(sieve) if alive)
    return out


def primes_in_range(lo: int, hi: int, segment: int | None = None) -> Iterator[int]:
    """Yield all primes p with lo <= p <= hi, in increasing order.

    Segmented, odd-only; memory is O(segment + sqrt(hi)).  ``segment``
    counts odd numbers per block and defaults to 2^20 (override with the
    SIXLINES_SIEVE_SEGMENT environment variable).

    >>> list(primes_in_range(10, 30))
    [11, 13, 17, 19, 23, 29]
    """
    if segment is None:
        segment = _segment_size()
    if hi < lo:
        return
    if lo <= 2 <= hi:
        yield 2
    base = _simple_sieve(int(math.isqrt(hi)))
    low = max(lo, 3)
    if low % 2 == 0:
        low += 1
    span = 2 * segment
    while low <= hi:
        high = min(low + span - 2, hi)  # inclusive, same parity as low
        count = (high - low) // 2 + 1
        mask = bytearray([1]) * count
        for p in base:
            if p == 2:
                continue
            if p * p > high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start > high:
                continue
            mask[(start - low) // 2 :: p] = bytearray(len(range((start - low) // 2, count, p)))
        for i, alive in enumerate(mask):
            if alive:
                yield low + 2 * i
        low = high + 2


def iter_primes(start: int, segment: int | None = None) -> Iterator[int]:
    """Unbounded ascending prime stream beginning at ``start``.

    Internally sieves doubling windows; used by the table initialisers,
    which do not know in advance how far they must scan.
    """
    lo = max(start, 2)
    width = 1 << 16
    while True:
        yield from primes_in_range(lo, lo + width - 1, segment)
        lo += width
        width *= 2
