"""Number-theoretic primitives: sieve, Kronecker symbol, Moebius, divisors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bkv.errors import InvalidArgument

# Above this limit the sieve runs segment by segment.
SEGMENT_THRESHOLD = 10**7
SEGMENT_SIZE = 1 << 20


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, as a read-only int64 array."""

    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def pi(self, x: int) -> int:
        """Prime counting function for ``x <= limit``."""
        if x > self.limit:
            raise InvalidArgument(f"pi({x}) requested beyond sieve limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def upto(self, x: int) -> np.ndarray:
        return self.primes[: self.pi(x)]


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _segmented_sieve(limit: int) -> np.ndarray:
    base = _simple_sieve(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1
    while lo <= limit:
        hi = min(lo + SEGMENT_SIZE, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            flags[start - lo :: p] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + lo)
        lo = hi
    return np.concatenate(chunks)


def sieve_primes(limit: int) -> PrimeTable:
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    if limit > SEGMENT_THRESHOLD:
        primes = _segmented_sieve(limit)
    else:
        primes = _simple_sieve(limit)
    primes.setflags(write=False)
    return PrimeTable(limit, primes)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extended to all integers n.

    Conventions: (a|0) = 1 iff a = +-1, (a|-1) = -1 if a < 0 else 1, and
    (a|2) = 0 for even a, 1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    s = 1
    if n < 0:
        n = -n
        if a < 0:
            s = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v & 1 and a % 8 in (3, 5):
            s = -s
    # Jacobi symbol for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization as (prime, exponent) pairs."""
    if n < 1:
        raise InvalidArgument(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


def moebius(n: int) -> int:
    if n < 1:
        raise InvalidArgument(f"moebius undefined at {n}")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def moebius_table(n_max: int) -> np.ndarray:
    """mu(0..n_max) as int8, entry 0 unused (set to 0)."""
    mu = np.ones(n_max + 1, dtype=np.int8)
    mu[0] = 0
    if n_max < 2:
        return mu
    for p in sieve_primes(n_max).primes:
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def divisors(n: int) -> list[int]:
    if n < 1:
        raise InvalidArgument(f"divisors undefined at {n}")
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise InvalidArgument(f"squarefree test undefined at {n}")
    return all(e == 1 for _, e in factorize(n))
