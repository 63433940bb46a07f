"""Sign statistics of a(t n^2) and finite-range density estimators.

Every sign is decided in exact integer arithmetic; floating point only
enters the ratios, Dirichlet partial sums and fits.

Dedekind-Dirichlet densities are limits as z -> 1+, which no truncated sum
can reach: for fixed n_max, (z - 1) * sum_{n <= n_max} n^-z tends to 0. The
estimators therefore report the raw truncated value next to a
tail-completed one, where the tail sum_{n > n_max} n^-z (a Hurwitz zeta
value) is weighted by the empirical natural density at n_max. The second
number is an extrapolation and is labelled as such.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from bkv._parallel import chunked_map
from bkv.errors import InvalidArgument, PrecisionExceeded
from bkv.numtheory import sieve_primes
from bkv.satotate import default_checkpoints, fit_error_exponent
from bkv.shimura import LiftRecord, inverse_lift


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _check_checkpoints(checkpoints: Sequence[int], x_max: int) -> list[int]:
    cps = [int(x) for x in checkpoints]
    if not cps:
        raise InvalidArgument("need at least one checkpoint")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise InvalidArgument("checkpoints must be strictly increasing")
    if cps[0] < 1 or cps[-1] > x_max:
        raise InvalidArgument(f"checkpoints must lie in [1, {x_max}]")
    return cps


def _require_positive_at(L: LiftRecord) -> None:
    if L.a_t <= 0:
        raise InvalidArgument(f"a(t) = {L.a_t} <= 0; negate the form first")


class PartitionCount(NamedTuple):
    x: int
    pi: int
    pos: int
    neg: int
    zero: int
    excluded: int


@dataclass(frozen=True)
class SignPartition:
    t: int
    x_max: int
    level: int
    counts: tuple[PartitionCount, ...]
    pos_primes: tuple[int, ...] = field(repr=False)
    neg_primes: tuple[int, ...] = field(repr=False)
    zero_primes: tuple[int, ...] = field(repr=False)
    excluded_primes: tuple[int, ...]

    def members(self, which: str) -> tuple[int, ...]:
        try:
            return {"pos": self.pos_primes, "neg": self.neg_primes, "zero": self.zero_primes}[which]
        except KeyError:
            raise InvalidArgument(f"unknown sign class {which!r}") from None

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,pi,pos,neg,zero,ratio_pos,ratio_neg\n")
        for c in self.counts:
            out.write(f"{c.x},{c.pi},{c.pos},{c.neg},{c.zero},{_fmt(c.pos / c.pi)},{_fmt(c.neg / c.pi)}\n")
        return out.getvalue()


def sign_partition(L: LiftRecord, x_max: int, checkpoints: Sequence[int] | None = None) -> SignPartition:
    """Classify sign a(t p^2) = A_t(p) - chi_t(p) p^(k-1) a(t) for p <= x_max."""
    _require_positive_at(L)
    if x_max > L.prec:
        raise PrecisionExceeded(f"A_t known to n={L.prec}, need {x_max}")
    cps = _check_checkpoints(checkpoints or default_checkpoints(x_max), x_max)
    primes = [int(p) for p in sieve_primes(max(x_max, 2)).primes if p <= x_max]
    excluded = tuple(p for p in primes if L.level % p == 0)
    km1 = L.k - 1
    A = L.lifted.coeffs

    def classify(ps):
        out = []
        for p in ps:
            v = A[p] - L.chi(p) * p**km1 * L.a_t
            out.append((v > 0) - (v < 0))
        return out

    kept = [p for p in primes if L.level % p]
    signs = chunked_map(classify, kept)
    pos = tuple(p for p, s in zip(kept, signs) if s > 0)
    neg = tuple(p for p, s in zip(kept, signs) if s < 0)
    zero = tuple(p for p, s in zip(kept, signs) if s == 0)

    def upto(seq, x):
        return int(np.searchsorted(np.asarray(seq, dtype=np.int64), x, side="right")) if seq else 0

    counts = tuple(
        PartitionCount(x, upto(primes, x), upto(pos, x), upto(neg, x), upto(zero, x), upto(excluded, x))
        for x in cps
    )
    return SignPartition(L.t, x_max, L.level, counts, pos, neg, zero, excluded)


@dataclass(frozen=True)
class DensityReport:
    target_density: float
    checkpoints: tuple[tuple[int, float, float], ...]  # (x, pi_S(x)/pi(x), E(x))
    fitted_C: float | None
    fitted_alpha: float | None
    prime_reciprocal_partial: tuple[float, ...]
    zero_count: int
    fit_status: str  # "ok", "degenerate" (all E = 0) or "insufficient"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,E,abs_E\n")
        for x, _, e in self.checkpoints:
            out.write(f"{x},{_fmt(e)},{_fmt(abs(e))}\n")
        if self.fit_status == "ok":
            out.write(f"# fit C={_fmt(self.fitted_C)} alpha={_fmt(self.fitted_alpha)} skipped_zero={self.zero_count}\n")
        else:
            out.write(f"# fit {self.fit_status} skipped_zero={self.zero_count}\n")
        return out.getvalue()


def fit_error_function(xs: Sequence[float], errors: Sequence[float]):
    """Log-log fit of |E(x)| skipping exact zeros: (C, alpha, zero_count, status)."""
    pts = [(x, abs(e)) for x, e in zip(xs, errors) if e != 0]
    zeros = len(xs) - len(pts)
    if not pts:
        return None, None, zeros, "degenerate"
    if len(pts) < 3:
        return None, None, zeros, "insufficient"
    C, alpha = fit_error_exponent(pts)
    return C, alpha, zeros, "ok"


def regularity_diagnostic(
    source: SignPartition | Sequence[int],
    d: float,
    checkpoints: Sequence[int],
    which: str = "pos",
) -> DensityReport:
    """E(x) = pi_S(x)/pi(x) - d on the checkpoint grid, its power-law fit, and
    the partial sums of 1/p over S."""
    members = source.members(which) if isinstance(source, SignPartition) else tuple(sorted(source))
    cps = [int(x) for x in checkpoints]
    if len(cps) < 3:
        raise InvalidArgument("need at least 3 checkpoints")
    cps = _check_checkpoints(cps, cps[-1])
    table = sieve_primes(max(cps[-1], 2))
    S = np.asarray(members, dtype=np.int64)
    recips = [1.0 / p for p in members]
    rows, partials = [], []
    for x in cps:
        pi_x = table.pi(x)
        m = int(np.searchsorted(S, x, side="right"))
        ratio = m / pi_x if pi_x else 0.0
        rows.append((x, ratio, ratio - d))
        partials.append(math.fsum(recips[:m]))
    C, alpha, zeros, status = fit_error_function([r[0] for r in rows], [r[2] for r in rows])
    return DensityReport(float(d), tuple(rows), C, alpha, tuple(partials), zeros, status)


@dataclass(frozen=True)
class SignSeries:
    """s(n) for n = 1..n_max; ``values[n - 1]`` holds s(n)."""

    t: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int8)
        if v.ndim != 1 or not np.isin(v, (-1, 0, 1)).all():
            raise InvalidArgument("sign values must be a 1-d sequence over {-1, 0, 1}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_max(self) -> int:
        return len(self.values)

    def s(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise PrecisionExceeded(f"s({n}) outside 1..{self.n_max}")
        return int(self.values[n - 1])

    def to_csv(self, checkpoints: Sequence[int]) -> str:
        cps = _check_checkpoints(checkpoints, self.n_max)
        pos = np.cumsum(self.values > 0)
        neg = np.cumsum(self.values < 0)
        out = io.StringIO()
        out.write("x,pi,pos,neg,zero,ratio_pos,ratio_neg\n")
        for x in cps:
            p, q = int(pos[x - 1]), int(neg[x - 1])
            out.write(f"{x},{x},{p},{q},{x - p - q},{_fmt(p / x)},{_fmt(q / x)}\n")
        return out.getvalue()


def sign_series(L: LiftRecord, n_max: int) -> SignSeries:
    _require_positive_at(L)
    vals = inverse_lift(L, n_max)
    return SignSeries(L.t, np.array([(v > 0) - (v < 0) for v in vals], dtype=np.int8))


def _values(series, n_max: int | None) -> np.ndarray:
    v = series.values if isinstance(series, SignSeries) else np.asarray(series)
    if n_max is None:
        n_max = len(v)
    if n_max > len(v):
        raise PrecisionExceeded(f"only {len(v)} values available, need {n_max}")
    return np.asarray(v[:n_max], dtype=float)


def _check_z(z: float, strict: bool = True) -> None:
    if z < 1 or (strict and z == 1):
        raise InvalidArgument(f"z must be {'>' if strict else '>='} 1, got {z}")


def dirichlet_partial(series, z: float, n_max: int | None = None) -> float:
    """sum_{n <= n_max} s(n) n^-z, correctly rounded via math.fsum."""
    _check_z(z)
    v = _values(series, n_max)
    n = np.arange(1, len(v) + 1, dtype=float)
    return math.fsum((v * n ** (-z)).tolist())


@dataclass(frozen=True)
class EulerCheck:
    sum: float
    product: float
    gap: float
    bound: float  # |sum - product| <= bound for multiplicative |s| <= 1
    higher_power_ok: bool  # |sum_{m>=2} s(p^m) p^-mz| <= 1/(p^z (p^z - 1)) for all p


def euler_product_check(series, z: float, p_max: int, n_max: int) -> EulerCheck:
    """Partial Dirichlet sum against the Euler product truncated at p <= p_max.

    For multiplicative s both sides are sums of s(n) n^-z over index sets
    that share every n <= p_max, so the gap is at most
    sum_{n > p_max} n^-z = hurwitz_zeta(z, p_max + 1).
    """
    _check_z(z)
    v = _values(series, n_max)
    if p_max > n_max or p_max < 2:
        raise InvalidArgument(f"need 2 <= p_max <= n_max, got p_max={p_max}, n_max={n_max}")
    total = dirichlet_partial(v, z)
    factors = []
    ok = True
    for p in sieve_primes(p_max).primes:
        p = int(p)
        terms = [1.0]
        pk = p
        while pk <= n_max:
            terms.append(v[pk - 1] * float(pk) ** (-z))
            pk *= p
        factors.append(math.fsum(terms))
        pz = float(p) ** z
        ok &= abs(math.fsum(terms[2:])) <= 1.0 / (pz * (pz - 1.0))
    product = math.prod(factors)
    return EulerCheck(total, product, abs(total - product), float(hurwitz_zeta(z, p_max + 1)), bool(ok))


class DDRow(NamedTuple):
    z: float
    raw: float
    tail_completed: float


def dedekind_dirichlet_estimate(indicator, z_sequence: Sequence[float]) -> list[DDRow]:
    """(z - 1) sum_{n in A, n <= n_max} n^-z, raw and tail-completed.

    ``indicator[n - 1]`` is truthy iff n is in A. The tail completion adds
    d_hat (z - 1) sum_{n > n_max} n^-z with d_hat = |A cap [1, n_max]| / n_max.
    """
    mask = np.asarray(indicator, dtype=bool)
    n_max = len(mask)
    if n_max == 0:
        raise InvalidArgument("empty indicator")
    zs = [float(z) for z in z_sequence]
    if not zs:
        raise InvalidArgument("need at least one z value")
    for z in zs:
        _check_z(z)
    if any(b >= a for a, b in zip(zs, zs[1:])):
        raise InvalidArgument("z values must be strictly decreasing")
    members = np.flatnonzero(mask).astype(float) + 1.0
    d_hat = len(members) / n_max
    rows = []
    for z in zs:
        raw = (z - 1) * math.fsum((members ** (-z)).tolist())
        tail = d_hat * (z - 1) * float(hurwitz_zeta(z, n_max + 1))
        rows.append(DDRow(z, raw, raw + tail))
    return rows


@dataclass(frozen=True)
class NonzeroDensityEstimate:
    nonzero: tuple[DDRow, ...]
    positive: tuple[DDRow, ...]
    a_of_z: tuple[float, ...]  # tail-completed (z-1)T(z) / ((z-1)zeta(z))
    a1_estimate: float

    @property
    def half_split_gap(self) -> float:
        """|positive - nonzero/2| at the smallest z, tail-completed."""
        return abs(self.positive[-1].tail_completed - self.nonzero[-1].tail_completed / 2)


def nonzero_density_estimate(series, z_sequence: Sequence[float], n_max: int | None = None) -> NonzeroDensityEstimate:
    """Estimates of A(1) = lim (z - 1) T(z), T(z) = sum s(n)^2 n^-z.

    A(z) = T(z)/zeta(z) is evaluated at each z from tail-completed values and
    linearly extrapolated in (z - 1) to z = 1 when more than one z is given.
    """
    v = _values(series, n_max)
    nonzero = dedekind_dirichlet_estimate(v != 0, z_sequence)
    positive = dedekind_dirichlet_estimate(v > 0, z_sequence)
    a_of_z = [r.tail_completed / ((r.z - 1) * float(hurwitz_zeta(r.z, 1))) for r in nonzero]
    if len(a_of_z) == 1:
        a1 = a_of_z[0]
    else:
        slope, intercept = np.polyfit([r.z - 1 for r in nonzero], a_of_z, 1)
        a1 = float(intercept)
    return NonzeroDensityEstimate(tuple(nonzero), tuple(positive), tuple(a_of_z), a1)


def dd_csv(rows: Sequence[DDRow]) -> str:
    out = io.StringIO()
    out.write("z,raw,tail_completed\n")
    for r in rows:
        out.write(f"{_fmt(r.z)},{_fmt(r.raw)},{_fmt(r.tail_completed)}\n")
    return out.getvalue()


def prime_sum_difference(S1: Sequence[int], S2: Sequence[int], z: float, p_max: int) -> float:
    """sum_{p in S1, p <= p_max} p^-z - sum_{p in S2, p <= p_max} p^-z."""
    _check_z(z, strict=False)
    terms = [float(p) ** (-z) for p in S1 if p <= p_max]
    terms += [-(float(p) ** (-z)) for p in S2 if p <= p_max]
    return math.fsum(terms)
