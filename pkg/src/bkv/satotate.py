"""Sato-Tate measure, empirical samples, discrepancy and power-law fits.

The discrepancy reported here is the Kolmogorov-Smirnov supremum of
|F_emp(v) - F_mu(v)|, i.e. the sup over one-sided intervals [-1, v]. Any
interval [a, b] is a difference of two such, so the sup over all
subintervals is at most twice this value (and at least this value).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from bkv.errors import InvalidArgument
from bkv.shimura import NormalizedSample

INTERVAL_FACTOR = 2  # sup over [a, b] <= INTERVAL_FACTOR * one-sided sup


def _check_interval(a: float, b: float) -> None:
    if not (-1.0 <= a <= b <= 1.0):
        raise InvalidArgument(f"need -1 <= a <= b <= 1, got [{a}, {b}]")


def _antiderivative(x):
    return x * np.sqrt(1.0 - x * x) + np.arcsin(x)


def st_cdf(v):
    """F_mu(v) = mu([-1, v]); vectorized, no quadrature."""
    v = np.clip(np.asarray(v, dtype=float), -1.0, 1.0)
    return 0.5 + _antiderivative(v) / math.pi


def st_measure(a: float, b: float) -> float:
    """mu([a, b]) for the semicircle density (2/pi) sqrt(1 - t^2)."""
    _check_interval(a, b)
    return float((_antiderivative(b) - _antiderivative(a)) / math.pi)


@dataclass(frozen=True)
class SatoTateSample:
    entries: tuple[NormalizedSample, ...]
    sorted_values: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_entries(cls, entries: Sequence[NormalizedSample]) -> "SatoTateSample":
        entries = tuple(sorted(entries, key=lambda s: s.prime))
        values = np.sort(np.array([s.value for s in entries], dtype=float))
        if values.size and (values[0] < -1.0 or values[-1] > 1.0):
            raise InvalidArgument("sample values must lie in [-1, 1]")
        values.setflags(write=False)
        return cls(entries, values)

    def __len__(self) -> int:
        return len(self.entries)

    def upto(self, x: int) -> "SatoTateSample":
        return SatoTateSample.from_entries([s for s in self.entries if s.prime <= x])


def _nonempty(S: SatoTateSample) -> None:
    if len(S) == 0:
        raise InvalidArgument("empty Sato-Tate sample")


def interval_density(S: SatoTateSample, a: float, b: float) -> float:
    _nonempty(S)
    v = S.sorted_values
    inside = np.searchsorted(v, b, side="right") - np.searchsorted(v, a, side="left")
    return float(inside) / len(v)


def discrepancy(S: SatoTateSample) -> float:
    _nonempty(S)
    v = S.sorted_values
    n = len(v)
    F = st_cdf(v)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - F)), np.max(np.abs((i - 1) / n - F))))


def fit_error_exponent(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares fit of log D = log C - alpha log x; returns (C, alpha)."""
    if len(points) < 3:
        raise InvalidArgument(f"need at least 3 points, got {len(points)}")
    xs = np.array([p[0] for p in points], dtype=float)
    ds = np.array([p[1] for p in points], dtype=float)
    if np.any(ds <= 0):
        raise InvalidArgument("all values must be positive for a log-log fit")
    if np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise InvalidArgument("x values must be positive and strictly increasing")
    slope, intercept = np.polyfit(np.log(xs), np.log(ds), 1)
    return math.exp(intercept), -float(slope)


@dataclass(frozen=True)
class DiscrepancyReport:
    checkpoints: tuple[tuple[int, int, float], ...]
    fitted_C: float | None
    fitted_alpha: float | None
    interval_factor: int = INTERVAL_FACTOR

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,pi_x,discrepancy\n")
        for x, n, d in self.checkpoints:
            out.write(f"{x},{n},{d:.12g}\n")
        if self.fitted_C is None:
            out.write("# fit unavailable (need >= 3 checkpoints with positive discrepancy)\n")
        else:
            out.write(f"# fit C={self.fitted_C:.12g} alpha={self.fitted_alpha:.12g}\n")
        return out.getvalue()


def default_checkpoints(x_max: int, start: int = 1000) -> list[int]:
    pts = []
    x = start
    while x < x_max:
        pts.append(x)
        x *= 10
    pts.append(x_max)
    return pts


def discrepancy_report(S: SatoTateSample, checkpoints: Sequence[int]) -> DiscrepancyReport:
    if list(checkpoints) != sorted(set(checkpoints)):
        raise InvalidArgument("checkpoints must be strictly increasing")
    primes = np.array([s.prime for s in S.entries], dtype=np.int64)
    values = np.array([s.value for s in S.entries], dtype=float)
    rows = []
    for x in checkpoints:
        m = int(np.searchsorted(primes, x, side="right"))
        if m == 0:
            raise InvalidArgument(f"no sample primes <= {x}")
        sub = SatoTateSample(S.entries[:m], np.sort(values[:m]))
        rows.append((int(x), m, discrepancy(sub)))
    pts = [(x, d) for x, _, d in rows if d > 0]
    C = alpha = None
    if len(pts) >= 3:
        C, alpha = fit_error_exponent(pts)
    return DiscrepancyReport(tuple(rows), C, alpha)
