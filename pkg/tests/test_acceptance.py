"""Acceptance criteria, one test (or parametrized group) per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import random
import time
from math import gcd

import pytest
from scipy.integrate import quad

from oracles import brute_tau

from bkv.cli import error_table_path, main
from bkv.density import dedekind_dirichlet_estimate, nonzero_density_estimate, sign_partition, sign_series
from bkv.forms import build_catalog_form, eigen_report
from bkv.numtheory import sieve_primes
from bkv.satotate import (
    SatoTateSample,
    default_checkpoints,
    discrepancy,
    discrepancy_report,
    fit_error_exponent,
    st_measure,
)
from bkv.shimura import check_multiplicativity, inverse_lift, normalized_samples, shimura_lift

X = 10**5
PROPERTY_SUITES = "property suites: sign multiplicativity, partition completeness, golden CSVs"


@pytest.fixture(scope="module")
def kz_million():
    return build_catalog_form("kz13_2", 10**6 + 1)


@pytest.mark.criterion(1, "exact Delta expansion vs pentagonal oracle")
def test_c01_delta_expansion():
    start = time.perf_counter()
    delta = build_catalog_form("delta", 20)
    elapsed = time.perf_counter() - start
    assert list(delta.expansion.coeffs[1:11]) == brute_tau(10)[1:11]
    assert (delta.expansion[2], delta.expansion[3], delta.expansion[5]) == (-24, 252, 4830)
    assert elapsed < 1.0


@pytest.mark.criterion(2, "Hecke eigenform reports for Delta and kz13_2")
def test_c02_eigenforms(delta_1e4, kz_small):
    start = time.perf_counter()
    for p in (int(p) for p in sieve_primes(50).primes):
        assert eigen_report(delta_1e4, p).proportional, p
    for p in (3, 5, 7):
        assert kz_small.prec >= 5 * p**4
        assert eigen_report(kz_small, p).proportional, p
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(3, "t = 1 lift of kz13_2 equals a(1) Delta for n <= 100")
def test_c03_shimura_correspondence(kz_small, delta_1e4):
    start = time.perf_counter()
    L = shimura_lift(kz_small, 1, 100)
    a1 = kz_small.expansion[1]
    assert all(L.lifted[n] == a1 * delta_1e4.expansion[n] for n in range(1, 101))
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(4, "inverse lift after lift is the identity, n <= 1000")
def test_c04_round_trip(kz_million):
    L = shimura_lift(kz_million, 1, 1000)
    recovered = inverse_lift(L, 1000)
    assert recovered == [kz_million.expansion[n * n] for n in range(1, 1001)]


@pytest.mark.criterion(5, "multiplicativity on coprime pairs mn <= 30")
def test_c05_multiplicativity(kz_small):
    assert check_multiplicativity(kz_small, 1, 30) == []


@pytest.mark.criterion(6, "Ramanujan bound tau(p)^2 <= 4 p^11 for p <= 1e5")
def test_c06_ramanujan(delta_big):
    start = time.perf_counter()
    tau = delta_big.expansion.coeffs
    primes = sieve_primes(X).primes
    assert len(primes) == 9592
    assert all(tau[p] ** 2 <= 4 * p**11 for p in map(int, primes))
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(7, "closed-form Sato-Tate measure vs quadrature")
def test_c07_sato_tate_measure():
    rng = random.Random(20240607)
    density = lambda t: 2 / math.pi * math.sqrt(1 - t * t)  # noqa: E731
    for _ in range(1000):
        a, b = sorted(rng.uniform(-1, 1) for _ in range(2))
        ref, _ = quad(density, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
        assert abs(st_measure(a, b) - ref) <= 1e-12
    assert st_measure(0.0, 1.0) == 0.5


@pytest.mark.criterion(8, "sign densities of a(p^2) at x = 1e5")
def test_c08_sign_densities(kz_lift_big):
    start = time.perf_counter()
    P = sign_partition(kz_lift_big, X)
    last = P.counts[-1]
    assert last.x == X and last.pi == 9592
    assert abs(last.pos / last.pi - 0.5) <= 0.05
    assert abs(last.neg / last.pi - 0.5) <= 0.05
    assert last.zero / last.pi <= 0.01
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(9, "Sato-Tate discrepancy of B_1(p) shrinks with x")
def test_c09_discrepancy(kz_lift_big):
    S = SatoTateSample.from_entries(normalized_samples(kz_lift_big, X))
    report = discrepancy_report(S, default_checkpoints(X))
    d = {x: disc for x, _, disc in report.checkpoints}
    assert discrepancy(S) == d[X]
    assert d[X] <= 0.05
    assert d[X] < d[1000]
    assert report.fitted_alpha > 0


@pytest.mark.criterion(10, "fit recovers planted power laws")
@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_c10_fit_recovery(alpha):
    C = 2.75
    pts = [(x, C * x**-alpha) for x in (10, 100, 1000, 10**4, 10**5)]
    got_C, got_alpha = fit_error_exponent(pts)
    assert got_C == pytest.approx(C, rel=1e-12, abs=0)
    assert got_alpha == pytest.approx(alpha, rel=1e-12, abs=0)


@pytest.mark.criterion(11, "Dedekind-Dirichlet density estimators")
def test_c11_density_estimators(kz_lift_big):
    n = 10**5
    naturals = [True] * n
    evens = [k % 2 == 0 for k in range(1, n + 1)]
    assert dedekind_dirichlet_estimate(naturals, [1.001])[0].tail_completed == pytest.approx(1.0, abs=0.01)
    assert dedekind_dirichlet_estimate(evens, [1.001])[0].tail_completed == pytest.approx(0.5, abs=0.01)
    est = nonzero_density_estimate(sign_series(kz_lift_big, n), [1.1, 1.05, 1.01])
    assert est.half_split_gap <= 0.05


@pytest.mark.criterion(12, PROPERTY_SUITES)
def test_c12_sign_multiplicativity(kz_lift_big):
    s = sign_series(kz_lift_big, 10**4)
    for m in range(1, 10**4 + 1):
        for n in range(m, 10**4 // m + 1):
            if gcd(m, n) == 1:
                assert s.s(m * n) == s.s(m) * s.s(n), (m, n)


@pytest.mark.criterion(12, PROPERTY_SUITES)
def test_c12_partition_completeness(kz_lift_big):
    P = sign_partition(kz_lift_big, X, [10, 100, 1000, 5000, 10**4, 50_000, X])
    table = sieve_primes(X)
    for c in P.counts:
        excluded = sum(1 for p in P.excluded_primes if p <= c.x)
        assert c.excluded == excluded
        assert c.pos + c.neg + c.zero + c.excluded == c.pi == table.pi(c.x)


GOLDEN = [
    ["signs", "--mode", "primes", "--x-max", str(X)],
    ["signs", "--mode", "all", "--n-max", str(X)],
    ["satotate", "--x-max", str(X)],
    ["density", "--n-max", str(X), "--x-max", str(X)],
]


@pytest.mark.criterion(12, PROPERTY_SUITES)
@pytest.mark.parametrize("argv", GOLDEN, ids=[" ".join(a[:3]) for a in GOLDEN])
def test_c12_golden_csv(tmp_path, monkeypatch, capsys, argv):
    outputs = []
    for run, threads in enumerate(("1", "1", "4")):
        monkeypatch.setenv("BKV_THREADS", threads)
        out = tmp_path / f"run{run}.csv"
        assert main([*argv, "--out", str(out)]) == 0
        files = [out, error_table_path(out)] if argv[0] == "density" else [out]
        outputs.append(b"".join(f.read_bytes() for f in files))
    capsys.readouterr()
    assert outputs[0] == outputs[1] == outputs[2]
    assert len(outputs[0].splitlines()) > 2
