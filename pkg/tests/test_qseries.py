import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_eta_power, brute_theta

from bkv.errors import InvalidArgument, PrecisionExceeded
from bkv.qseries import (
    QExpansion,
    add,
    coefficient,
    delta_series,
    euler_product,
    eta_cubed,
    mul,
    odd_sigma_series,
    one,
    power,
    theta_series,
    zero,
)


def series(coeffs):
    return QExpansion.from_list(coeffs)


small_series = st.integers(1, 200).flatmap(
    lambda n: st.lists(st.integers(-50, 50), min_size=n, max_size=n)
)


def test_add_examples():
    a = series([1, 1, 0])
    b = series([1, -1, 0])
    assert add(a, b).coeffs == (2, 0, 0)
    assert add(a, zero(3)) == a
    th = theta_series(10)
    assert coefficient(th + th, 1) == 4


def test_mul_examples():
    a = series([1, 1, 0, 0])
    b = series([1, -1, 0, 0])
    assert mul(a, b).coeffs == (1, 0, -1, 0)
    assert mul(a, one(4)) == a
    eta = euler_product(50)
    assert list(mul(eta, eta).coeffs) == brute_eta_power(2, 50)


def test_pow_examples():
    a = series([1, 1, 0, 0])
    assert power(a, 1) == a
    assert power(a, 2).coeffs == (1, 2, 1, 0)
    # tau series: q * eta^24, coefficient of q^2 is -24
    assert power(euler_product(3), 24).coeffs[1] == -24
    with pytest.raises(InvalidArgument):
        power(a, 0)


def test_euler_product_examples():
    c = euler_product(8).coeffs
    assert list(c) == brute_eta_power(1, 8)
    assert (c[0], c[1], c[2], c[5], c[7]) == (1, -1, -1, 1, 1)
    assert c[3] == 0


def test_euler_product_and_theta_vs_definition_to_1000():
    assert list(euler_product(1000).coeffs) == brute_eta_power(1, 1000)
    assert list(theta_series(1000).coeffs) == brute_theta(1000)


def test_theta_examples():
    th = theta_series(100)
    assert [th[i] for i in (0, 1, 4, 9)] == [1, 2, 2, 2]
    assert th[2] == 0
    assert sum(th.coeffs) == 19


def test_odd_sigma_examples():
    f = odd_sigma_series(200)
    assert [f[i] for i in (1, 3, 5, 7)] == [1, 4, 6, 8]
    assert f[2] == 0
    assert f[9] == 13
    for n in range(200):
        expected = sum(d for d in range(1, n + 1) if n % d == 0) if n % 2 else 0
        assert f[n] == expected


def test_coefficient_errors():
    th = theta_series(10)
    assert coefficient(th, 4) == 2
    assert coefficient(one(1), 0) == 1
    with pytest.raises(PrecisionExceeded):
        coefficient(th, 10)


def test_delta_against_pentagonal_oracle():
    d = delta_series(40)
    assert list(d.coeffs) == [0] + brute_eta_power(24, 39)
    assert coefficient(d, 2) == -24


def test_jacobi_identity_matches_euler_product_cubed():
    prec = 10**4
    assert power(euler_product(prec), 3) == eta_cubed(prec)


@pytest.mark.parametrize("method", ["sparse", "school", "kronecker"])
def test_paths_agree_on_dense_inputs(method):
    a = power(euler_product(300), 5)
    b = power(theta_series(300), 3)
    assert mul(a, b, method=method) == mul(a, b, method="school")


def test_kronecker_handles_huge_coefficients():
    a = series([(-1) ** i * (10**40 + i) for i in range(80)])
    b = series([(-1) ** (i // 3) * (3**90 - i) for i in range(80)])
    assert mul(a, b, method="kronecker") == mul(a, b, method="school")


def test_unknown_method():
    with pytest.raises(InvalidArgument):
        mul(one(3), one(3), method="fft")


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_laws(x, y, z):
    a, b, c = series(x), series(y), series(z)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(a, b) == mul(b, a)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series)
def test_precision_law(x, y):
    a, b = series(x), series(y)
    assert mul(a, b).prec == min(a.prec, b.prec)
    assert add(a, b).prec == min(a.prec, b.prec)


@settings(max_examples=40, deadline=None)
@given(small_series, st.integers(1, 8))
def test_power_equals_repeated_mul(x, e):
    a = series(x)
    expected = a
    for _ in range(e - 1):
        expected = mul(expected, a)
    assert power(a, e) == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-10**30, 10**30), min_size=30, max_size=200))
def test_all_paths_bit_exact(x):
    a = series(x)
    b = series(list(reversed(x)))
    ref = mul(a, b, method="school")
    assert mul(a, b, method="sparse") == ref
    assert mul(a, b, method="kronecker") == ref


def test_power_of_sparse_base_uses_sparse_path(monkeypatch):
    import bkv.qseries as qs

    seen = []
    original = qs._choose_path

    def spy(ta, tb, n):
        path = original(ta, tb, n)
        seen.append((len(ta), len(tb), path))
        return path

    monkeypatch.setattr(qs, "_choose_path", spy)
    prec = 2500
    power(theta_series(prec), 2)
    assert seen[0][2] == "sparse"
    assert seen[0][0] <= 2 * math.isqrt(prec)
