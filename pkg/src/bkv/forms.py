"""Modular form records, the shipped catalog and Hecke operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from bkv.errors import ConstructionFailure, InvalidArgument, PrecisionExceeded
from bkv.numtheory import is_prime, kronecker
from bkv.qseries import (
    QExpansion,
    add,
    delta_series,
    mul,
    odd_sigma_series,
    power,
    theta_series,
)

CATALOG = ("delta", "kz13_2")

# Integral-weight partner of each half-integral catalog form under the lift.
PARTNERS = {"kz13_2": "delta"}

# Coefficients of kz13_2 are fixed by linear algebra on this many terms.
KZ_SOLVE_PREC = 40


@dataclass(frozen=True)
class FormRecord:
    weight2: int
    level: int
    char_disc: int
    expansion: QExpansion
    label: str = "form"

    def __post_init__(self):
        if self.weight2 < 1:
            raise InvalidArgument(f"weight2 must be positive, got {self.weight2}")
        if self.level < 1:
            raise InvalidArgument(f"level must be positive, got {self.level}")
        if self.weight2 % 2 and self.level % 4:
            raise InvalidArgument(f"half-integral weight needs 4 | level, got level {self.level}")
        if self.char_disc == 0:
            raise InvalidArgument("character discriminant must be nonzero")
        if not self.label or any(ch.isspace() for ch in self.label):
            raise InvalidArgument(f"label must be a nonempty token, got {self.label!r}")

    @property
    def half_integral(self) -> bool:
        return self.weight2 % 2 == 1

    @property
    def k(self) -> int:
        """k for weight k + 1/2, or the weight itself when integral."""
        return (self.weight2 - 1) // 2 if self.half_integral else self.weight2 // 2

    @property
    def prec(self) -> int:
        return self.expansion.prec

    def chi(self, d: int) -> int:
        return kronecker(self.char_disc, d)

    def with_expansion(self, expansion: QExpansion, label: str | None = None) -> "FormRecord":
        return FormRecord(self.weight2, self.level, self.char_disc, expansion, label or self.label)

    def negated(self) -> "FormRecord":
        return self.with_expansion(self.expansion.scale(-1))


@dataclass(frozen=True)
class HeckeReport:
    prime: int
    eigenvalue: Fraction
    verified_upto: int  # largest index compared
    proportional: bool
    first_failure: int | None = None

    def __str__(self) -> str:
        state = "true" if self.proportional else f"false (first failure at n={self.first_failure})"
        return (
            f"p={self.prime} eigenvalue={self.eigenvalue} "
            f"verified_upto={self.verified_upto} proportional={state}"
        )


def _kz13_2(prec: int) -> QExpansion:
    n = max(prec, KZ_SOLVE_PREC)
    theta = theta_series(n)
    sigma = odd_sigma_series(n)
    monomials = []
    for a, b in ((13, 0), (9, 1), (5, 2), (1, 3)):
        m = power(theta, a)
        if b:
            m = mul(m, power(sigma, b))
        monomials.append(m)

    # vanishing constant term plus the plus-space conditions (k = 6 is even)
    rows = [[m[i] for m in monomials] for i in range(KZ_SOLVE_PREC) if i == 0 or i % 4 in (2, 3)]
    from sympy import Matrix

    null = Matrix(rows).nullspace()
    if len(null) != 1:
        raise ConstructionFailure(f"expected a one-dimensional solution space, got {len(null)}")
    vec = [Fraction(int(v.p), int(v.q)) for v in null[0]]
    scale = lcm(*(v.denominator for v in vec))
    ints = [int(v * scale) for v in vec]

    combo = monomials[0].scale(ints[0])
    for c, m in zip(ints[1:], monomials[1:]):
        combo = add(combo, m.scale(c))
    lead = next((combo[i] for i in range(n) if combo[i] and i % 4 in (0, 1)), 0)
    if lead == 0:
        raise ConstructionFailure("combination vanishes to the available precision")
    if any(c % lead for c in combo.coeffs):
        raise ConstructionFailure("normalized combination has non-integral coefficients")
    result = QExpansion(tuple(c // lead for c in combo.coeffs))
    if any(result[i] for i in range(n) if i % 4 in (2, 3)):
        raise ConstructionFailure("plus-space condition fails beyond the solved range")
    return result.truncate(prec)


def build_catalog_form(label: str, prec: int) -> FormRecord:
    """Expand one of the catalog eigenforms to ``prec`` coefficients.

    ``delta`` is Ramanujan's Delta (weight 12, level 1). ``kz13_2`` is the
    weight 13/2 cusp form in Kohnen's plus space on Gamma_0(4), found as the
    unique normalized combination of theta^a F^b (a + 4b = 13) that kills
    the constant term and every coefficient of index 2, 3 mod 4.
    """
    if prec < 20:
        raise InvalidArgument(f"catalog forms need prec >= 20, got {prec}")
    if label == "delta":
        return FormRecord(24, 1, 1, delta_series(prec), "delta")
    if label == "kz13_2":
        return FormRecord(13, 4, 1, _kz13_2(prec), "kz13_2")
    raise InvalidArgument(f"unknown catalog label {label!r}; choose from {', '.join(CATALOG)}")


def _check_prime(p: int, level: int) -> None:
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    if level % p == 0:
        raise InvalidArgument(f"p={p} divides the level {level}")


def hecke_tp_integral(F: FormRecord, p: int) -> QExpansion:
    """T_p on integral weight: A(pn) + chi(p) p^(w-1) A(n/p)."""
    if F.half_integral:
        raise InvalidArgument("T_p needs integral weight")
    _check_prime(p, F.level)
    if p * p >= F.prec:
        raise PrecisionExceeded(f"T_{p} needs prec > {p * p}, have {F.prec}")
    a = F.expansion.coeffs
    tail = F.chi(p) * p ** (F.k - 1)
    out = []
    for n in range(F.prec // p):
        v = a[p * n]
        if n % p == 0:
            v += tail * a[n // p]
        out.append(v)
    return QExpansion(tuple(out))


def hecke_tp2_half(f: FormRecord, p: int) -> QExpansion:
    """T_{p^2} on weight k + 1/2, in Shimura's normalization."""
    if not f.half_integral:
        raise InvalidArgument("T_{p^2} needs half-integral weight")
    _check_prime(p, f.level)
    if p**4 >= f.prec:
        raise PrecisionExceeded(f"T_{p}^2 needs prec > {p**4}, have {f.prec}")
    k = f.k
    a = f.expansion.coeffs
    p2 = p * p
    chi_p = f.chi(p)
    mid = chi_p * p ** (k - 1)
    last = chi_p * chi_p * p ** (2 * k - 1)
    sign = (-1) ** k
    out = []
    for n in range(f.prec // p2):
        v = a[p2 * n] + mid * kronecker(sign * n, p) * a[n]
        if n % p2 == 0:
            v += last * a[n // p2]
        out.append(v)
    return QExpansion(tuple(out))


def hecke(form: FormRecord, p: int) -> QExpansion:
    return hecke_tp2_half(form, p) if form.half_integral else hecke_tp_integral(form, p)


MIN_PAIRS = 10


def eigen_report(f: FormRecord, p: int) -> HeckeReport:
    image = hecke(f, p)
    m = image.prec
    if m < MIN_PAIRS + 1:
        raise PrecisionExceeded(f"only {m} coefficients after the Hecke operator, need {MIN_PAIRS + 1}")
    a = f.expansion.coeffs
    n0 = next((n for n in range(m) if a[n]), None)
    if n0 is None:
        raise InvalidArgument("form vanishes to the available precision")
    b = image.coeffs
    first_failure = next((n for n in range(m) if b[n] * a[n0] != b[n0] * a[n]), None)
    return HeckeReport(p, Fraction(b[n0], a[n0]), m - 1, first_failure is None, first_failure)
