"""The Shimura lift, its Moebius inversion and the Sato-Tate normalization.

For a weight k + 1/2 eigenform f = sum a(n) q^n and squarefree t,

    A_t(n) = sum_{d | n} chi_t(d) d^(k-1) a(t n^2 / d^2),

with chi_t(d) = chi(d) * ((-1)^k M^2 t | d). Shimura's normalization takes
M = N (the lift lives on level N/2). For forms in Kohnen's plus space on
level 4M' with M' odd the refined lift takes M = N/4 and lands on level
N/4; this is the one that sends the weight 13/2 plus-space form to Delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bkv._parallel import chunked_map
from bkv.errors import (
    ConstructionFailure,
    InvalidArgument,
    PrecisionExceeded,
    RamanujanViolation,
)
from bkv.forms import FormRecord
from bkv.numtheory import is_prime, is_squarefree, kronecker, moebius_table, sieve_primes
from bkv.qseries import QExpansion

CONVENTIONS = ("auto", "shimura", "kohnen")


@dataclass(frozen=True)
class LiftRecord:
    source_label: str
    t: int
    a_t: int
    k: int
    level: int
    char_disc: int
    lifted: QExpansion
    plus_space: bool = False

    def __post_init__(self):
        if self.t < 1 or not is_squarefree(self.t):
            raise InvalidArgument(f"t must be a positive squarefree integer, got {self.t}")
        if self.a_t == 0:
            raise InvalidArgument("a(t) must be nonzero")
        if self.lifted.prec < 2 or self.lifted[1] != self.a_t:
            raise InvalidArgument("lifted expansion must start with A_t(1) = a(t)")

    @property
    def prec(self) -> int:
        """Largest n with A_t(n) known."""
        return self.lifted.prec - 1

    @property
    def convention(self) -> str:
        return "kohnen" if self.plus_space else "shimura"

    @property
    def char_params(self) -> tuple[int, int]:
        m = self.level // 4 if self.plus_space else self.level
        return ((-1) ** self.k * m * m * self.t, self.char_disc)

    @property
    def lift_level(self) -> int:
        return self.level // 4 if self.plus_space else self.level // 2

    def chi(self, d: int) -> int:
        top, disc = self.char_params
        return kronecker(disc, d) * kronecker(top, d)

    def as_form(self) -> FormRecord:
        """The lift as an integral weight record (weight 2k, trivial character)."""
        return FormRecord(4 * self.k, self.lift_level, 1, self.lifted, f"{self.source_label}_lift_t{self.t}")

    def negated(self) -> "LiftRecord":
        return LiftRecord(
            self.source_label, self.t, -self.a_t, self.k, self.level,
            self.char_disc, self.lifted.scale(-1), self.plus_space,
        )


@dataclass(frozen=True)
class NormalizedSample:
    prime: int
    value: float


def chi_tN(d: int, ctx: LiftRecord) -> int:
    return ctx.chi(d)


def is_plus_space(f: FormRecord) -> bool:
    """Kohnen plus-space test on the available coefficients."""
    if not f.half_integral or f.level % 4 or (f.level // 4) % 2 == 0 or f.char_disc != 1:
        return False
    sign = (-1) ** f.k
    return not any(c for n, c in enumerate(f.expansion.coeffs) if (sign * n) % 4 in (2, 3))


def _resolve_convention(f: FormRecord, convention: str) -> bool:
    if convention not in CONVENTIONS:
        raise InvalidArgument(f"unknown lift convention {convention!r}")
    if convention == "auto":
        return is_plus_space(f)
    if convention == "kohnen" and not is_plus_space(f):
        raise InvalidArgument(f"{f.label} is not in Kohnen's plus space")
    return convention == "kohnen"


def _dirichlet_convolve(weights: list[int], values: list[int], n_max: int) -> list[int]:
    """(w * v)(n) = sum_{d | n} w(d) v(n/d) for 1 <= n <= n_max (index 0 unused)."""
    v = np.empty(n_max + 1, dtype=object)
    v[:] = values[: n_max + 1]
    out = np.zeros(n_max + 1, dtype=object)
    for d in range(1, n_max + 1):
        w = weights[d]
        if w:
            out[d::d] += w * v[1 : n_max // d + 1]
    out[0] = 0
    return [int(x) for x in out]


def _source_checks(f: FormRecord, t: int) -> int:
    if not f.half_integral:
        raise InvalidArgument("the Shimura lift needs a half-integral weight source")
    if t < 1 or not is_squarefree(t):
        raise InvalidArgument(f"t must be a positive squarefree integer, got {t}")
    if t >= f.prec:
        raise PrecisionExceeded(f"a({t}) not known at precision {f.prec}")
    a_t = f.expansion[t]
    if a_t == 0:
        raise InvalidArgument(f"a({t}) = 0; the lift needs a(t) != 0")
    return a_t


def shimura_lift(f: FormRecord, t: int, prec: int, convention: str = "auto") -> LiftRecord:
    """A_t(n) for 1 <= n <= prec, computed directly from f's coefficients."""
    if prec < 1:
        raise InvalidArgument("prec must be positive")
    a_t = _source_checks(f, t)
    if f.prec <= t * prec * prec:
        raise PrecisionExceeded(f"lift to n={prec} needs source precision > {t * prec * prec}, have {f.prec}")
    plus = _resolve_convention(f, convention)
    a = f.expansion.coeffs
    k = f.k
    stub = LiftRecord(f.label, t, a_t, k, f.level, f.char_disc, QExpansion((0, a_t)), plus)
    weights = [0] + [stub.chi(d) * d ** (k - 1) for d in range(1, prec + 1)]
    values = [0] + [a[t * m * m] for m in range(1, prec + 1)]
    lifted = _dirichlet_convolve(weights, values, prec)
    return LiftRecord(f.label, t, a_t, k, f.level, f.char_disc, QExpansion(tuple(lifted)), plus)


def lift_from_partner(
    f: FormRecord,
    partner: FormRecord,
    t: int,
    prec: int,
    validate_upto: int = 20,
    convention: str = "auto",
) -> LiftRecord:
    """Lift via a known normalized integral-weight eigenform F: A_t = a(t) F.

    The direct lift is computed from f up to ``validate_upto`` and must agree
    with a(t) F exactly there; beyond that only F is used, which is what makes
    x ~ 10^5 statistics affordable.
    """
    direct = shimura_lift(f, t, validate_upto, convention)
    if partner.half_integral or partner.weight2 != 4 * f.k:
        raise InvalidArgument(f"partner must have weight {2 * f.k}")
    if partner.prec <= prec:
        raise PrecisionExceeded(f"partner known to n={partner.prec - 1}, need {prec}")
    if partner.expansion[1] != 1:
        raise InvalidArgument("partner must be normalized (A(1) = 1)")
    a_t = direct.a_t
    for n in range(1, validate_upto + 1):
        if direct.lifted[n] != a_t * partner.expansion[n]:
            raise ConstructionFailure(f"lift of {f.label} differs from a(t)*{partner.label} at n={n}")
    lifted = partner.expansion.truncate(prec + 1).scale(a_t)
    return LiftRecord(f.label, t, a_t, f.k, f.level, f.char_disc, lifted, direct.plus_space)


def inverse_lift(L: LiftRecord, n_max: int) -> list[int]:
    """a(t n^2) for n = 1..n_max by Moebius inversion of the lift relation."""
    if n_max < 1:
        raise InvalidArgument("n_max must be positive")
    if n_max > L.prec:
        raise PrecisionExceeded(f"A_t known to n={L.prec}, need {n_max}")
    mu = moebius_table(n_max)
    km1 = L.k - 1
    weights = [0] + [int(mu[d]) * L.chi(d) * d**km1 if mu[d] else 0 for d in range(1, n_max + 1)]
    return _dirichlet_convolve(weights, list(L.lifted.coeffs), n_max)[1:]


def check_multiplicativity(f: FormRecord, t: int, bound: int) -> list[tuple[int, int]]:
    """Coprime pairs m <= n with mn <= bound violating a(tm^2)a(tn^2) = a(t)a(tm^2n^2)."""
    a_t = _source_checks(f, t)
    if f.prec <= t * bound * bound:
        raise PrecisionExceeded(f"need source precision > {t * bound * bound}, have {f.prec}")
    a = f.expansion.coeffs
    bad = []
    for m in range(1, bound + 1):
        for n in range(m, bound // m + 1):
            if math.gcd(m, n) == 1 and a[t * m * m] * a[t * n * n] != a_t * a[t * m * m * n * n]:
                bad.append((m, n))
    return bad


def normalize_bp(L: LiftRecord, p: int) -> NormalizedSample:
    """B_t(p) = A_t(p) / (2 a(t) p^(k - 1/2)), after an exact Ramanujan check."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if L.level % p == 0:
        raise InvalidArgument(f"p={p} divides the level {L.level}")
    if p > L.prec:
        raise PrecisionExceeded(f"A_t({p}) not known (lift known to n={L.prec})")
    return _normalize(L, p)


def _normalize(L: LiftRecord, p: int) -> NormalizedSample:
    a = L.lifted.coeffs[p]
    if a * a > 4 * L.a_t * L.a_t * p ** (2 * L.k - 1):
        raise RamanujanViolation(f"|A_t({p})| = {abs(a)} exceeds 2|a(t)| {p}^({L.k}-1/2)")
    value = a / (2 * L.a_t * p ** (L.k - 1)) / math.sqrt(p)
    # the exact certificate above already holds; clamp only absorbs rounding
    return NormalizedSample(p, min(1.0, max(-1.0, value)))


def normalized_samples(L: LiftRecord, x_max: int) -> list[NormalizedSample]:
    """B_t(p) for every prime p <= x_max not dividing the level, ordered by p."""
    if x_max > L.prec:
        raise PrecisionExceeded(f"A_t known to n={L.prec}, need {x_max}")
    if x_max < 2:
        return []
    primes = [int(p) for p in sieve_primes(x_max).primes if L.level % int(p)]
    return chunked_map(lambda ps: [_normalize(L, p) for p in ps], primes)
