"""Exact truncated q-expansions with integer coefficients.

Multiplication picks one of three exact paths:

* ``sparse``: term-list convolution, used when an operand has few nonzero
  terms (theta, the pentagonal Euler product, eta^3 and their small powers);
* ``school``: direct Cauchy product for very short series;
* ``kronecker``: Kronecker substitution, packing both series into big
  integers with slots wide enough that no carry can cross a slot, then one
  big-integer multiplication (GMP when gmpy2 is importable).

All three return identical coefficient tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from bkv.errors import InvalidArgument, PrecisionExceeded

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _bigint = int

SCHOOL_CUTOFF = 24


@dataclass(frozen=True, eq=True)
class QExpansion:
    """Coefficients of q^0 .. q^(prec-1); ``prec = len(coeffs)``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 1:
            raise InvalidArgument("a q-expansion needs prec >= 1")

    @classmethod
    def from_list(cls, coeffs: Iterable[int], prec: int | None = None) -> "QExpansion":
        c = [int(v) for v in coeffs]
        if prec is not None:
            c = c[:prec] + [0] * (prec - len(c))
        return cls(tuple(c))

    @classmethod
    def monomial(cls, n: int, prec: int, value: int = 1) -> "QExpansion":
        c = [0] * prec
        if n < prec:
            c[n] = value
        return cls(tuple(c))

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        return coefficient(self, n)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        return add(self, other)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return add(self, other.scale(-1))

    def __neg__(self) -> "QExpansion":
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QExpansion":
        return power(self, e)

    def scale(self, c: int) -> "QExpansion":
        return QExpansion(tuple(c * v for v in self.coeffs))

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise PrecisionExceeded(f"cannot extend precision {self.prec} to {prec}")
        return QExpansion(self.coeffs[:prec])

    def shift(self, s: int) -> "QExpansion":
        """Multiply by q^s, keeping the precision honest (prec grows by s)."""
        return QExpansion((0,) * s + self.coeffs)

    def nonzero_terms(self) -> list[tuple[int, int]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"QExpansion(prec={self.prec}, [{head}{', ...' if self.prec > 6 else ''}])"


def zero(prec: int) -> QExpansion:
    return QExpansion((0,) * prec)


def one(prec: int) -> QExpansion:
    return QExpansion.monomial(0, prec)


def coefficient(a: QExpansion, n: int) -> int:
    if n < 0:
        raise InvalidArgument(f"negative index {n}")
    if n >= a.prec:
        raise PrecisionExceeded(f"coefficient {n} requested, only {a.prec} known")
    return a.coeffs[n]


def add(a: QExpansion, b: QExpansion) -> QExpansion:
    n = min(a.prec, b.prec)
    return QExpansion(tuple(x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])))


def _sparse_mul(ta, tb, n):
    out = [0] * n
    for i, x in ta:
        if i >= n:
            break
        lim = n - i
        for j, y in tb:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


def _school_mul(a, b, n):
    out = [0] * n
    for i in range(min(n, len(a))):
        x = a[i]
        if x:
            for j in range(min(n - i, len(b))):
                out[i + j] += x * b[j]
    return out


def _pack(coeffs: Sequence[int], nbytes: int):
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return _bigint(int.from_bytes(pos, "little")) - _bigint(int.from_bytes(neg, "little"))


def _unpack(x, nbytes: int, n: int) -> list[int]:
    negative = x < 0
    if negative:
        x = -x
    raw = int(x).to_bytes(max(n * nbytes, (int(x).bit_length() + 7) // 8), "little")
    half = 1 << (8 * nbytes - 1)
    full = 1 << (8 * nbytes)
    out = []
    carry = 0
    for i in range(n):
        v = int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(-v if negative else v)
    return out


def _kronecker_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    a = a[:n]
    b = b[:n]
    ba = max(abs(c) for c in a).bit_length()
    bb = max(abs(c) for c in b).bit_length()
    if ba == 0 or bb == 0:
        return [0] * n
    # |c_i| < 2^(ba+bb) * min(len) fits a signed slot with room to spare
    bits = ba + bb + min(len(a), len(b)).bit_length() + 1
    nbytes = (bits + 7) // 8
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, n)


def _choose_path(ta, tb, n) -> str:
    na, nb = len(ta), len(tb)
    if na * nb <= 4 * n or max(na, nb) <= 2 * math.isqrt(n) + 2:
        return "sparse"
    if n <= SCHOOL_CUTOFF:
        return "school"
    return "kronecker"


def mul(a: QExpansion, b: QExpansion, method: str = "auto") -> QExpansion:
    """Cauchy product truncated to the smaller precision."""
    n = min(a.prec, b.prec)
    ta = [t for t in a.nonzero_terms() if t[0] < n]
    tb = [t for t in b.nonzero_terms() if t[0] < n]
    if not ta or not tb:
        return zero(n)
    if method == "auto":
        method = _choose_path(ta, tb, n)
    if method == "sparse":
        if len(ta) > len(tb):
            ta, tb = tb, ta
        out = _sparse_mul(ta, tb, n)
    elif method == "school":
        out = _school_mul(a.coeffs, b.coeffs, n)
    elif method == "kronecker":
        out = _kronecker_mul(a.coeffs, b.coeffs, n)
    else:
        raise InvalidArgument(f"unknown multiplication method {method!r}")
    return QExpansion(tuple(out))


def power(a: QExpansion, e: int) -> QExpansion:
    """a**e by binary powering; every step goes through the sparse-aware mul."""
    if e < 1:
        raise InvalidArgument(f"exponent must be >= 1, got {e}")
    result = None
    base = a
    while True:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if not e:
            return result
        base = mul(base, base)


def euler_product(prec: int) -> QExpansion:
    """prod_{n>=1} (1 - q^n) by the pentagonal number theorem."""
    if prec < 1:
        raise InvalidArgument("prec must be >= 1")
    c = [0] * prec
    c[0] = 1
    m = 1
    while m * (3 * m - 1) // 2 < prec:
        sign = -1 if m % 2 else 1
        for idx in (m * (3 * m - 1) // 2, m * (3 * m + 1) // 2):
            if idx < prec:
                c[idx] = sign
        m += 1
    return QExpansion(tuple(c))


def eta_cubed(prec: int) -> QExpansion:
    """prod (1 - q^n)^3 = sum_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}  (Jacobi)."""
    if prec < 1:
        raise InvalidArgument("prec must be >= 1")
    c = [0] * prec
    m = 0
    while m * (m + 1) // 2 < prec:
        c[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
        m += 1
    return QExpansion(tuple(c))


def theta_series(prec: int) -> QExpansion:
    """sum over all integers n of q^(n^2)."""
    if prec < 1:
        raise InvalidArgument("prec must be >= 1")
    c = [0] * prec
    c[0] = 1
    for n in range(1, math.isqrt(prec - 1) + 1):
        c[n * n] = 2
    return QExpansion(tuple(c))


def odd_sigma_series(prec: int) -> QExpansion:
    """sum over odd n of sigma_1(n) q^n."""
    if prec < 1:
        raise InvalidArgument("prec must be >= 1")
    import numpy as np

    sig = np.zeros(prec, dtype=np.int64)
    for d in range(1, prec, 2):
        sig[d :: 2 * d] += d
    return QExpansion(tuple(int(v) for v in sig))


def delta_series(prec: int) -> QExpansion:
    """Ramanujan's Delta = q * prod (1 - q^n)^24, built as q * (eta^3)^8."""
    if prec < 2:
        raise InvalidArgument("prec must be >= 2")
    return power(eta_cubed(prec - 1), 8).shift(1)
