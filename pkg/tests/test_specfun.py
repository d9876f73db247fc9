import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dynquant.specfun import assoc_laguerre, gauss_legendre, gegenbauer, jacobi, log_gamma


# exact series oracles (independent of the recurrences under test)

def _rising(a, k):
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def _gbinom(top, k):
    out = Fraction(1)
    for j in range(k):
        out *= top - j
    return out / math.factorial(k)


def gegenbauer_series(n, a, x):
    a, x = Fraction(a), Fraction(x)
    return sum((-1) ** k * _rising(a, n - k) / (math.factorial(k) * math.factorial(n - 2 * k))
               * (2 * x) ** (n - 2 * k) for k in range(n // 2 + 1))


def jacobi_series(n, a, b, x):
    a, b, x = Fraction(a), Fraction(b), Fraction(x)
    return sum(_gbinom(n + a, n - s) * _gbinom(n + b, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s)
               for s in range(n + 1))


def laguerre_series(n, k, x):
    x = Fraction(x)
    return sum(Fraction((-1) ** m * math.comb(n + k, n - m), math.factorial(m)) * x ** m
               for m in range(n + 1))


def test_gegenbauer_examples():
    assert gegenbauer(0, 0.7, 0.3) == 1.0
    assert gegenbauer(1, 1.5, 0.2) == pytest.approx(0.6)
    assert gegenbauer(2, 1.0, 0.5) == pytest.approx(float(gegenbauer_series(2, 1, Fraction(1, 2))), abs=1e-15)
    assert gegenbauer(2, 1.0, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_jacobi_examples():
    assert jacobi(0, 0.3, 2.0, 0.1) == 1.0
    assert jacobi(1, 1, 1, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert jacobi(1, 2, 0, 0.5) == pytest.approx(2.0)


def test_laguerre_examples():
    assert assoc_laguerre(0, 1, 3.3) == 1.0
    assert assoc_laguerre(1, 1, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert assoc_laguerre(2, 1, 1.0) == pytest.approx(float(laguerre_series(2, 1, 1)))


@pytest.mark.parametrize("fn, args", [(gegenbauer, (-1, 1.0, 0.1)), (gegenbauer, (1.5, 1.0, 0.1)),
                                      (jacobi, (-2, 1, 1, 0.0)), (assoc_laguerre, (2, -1, 0.0)),
                                      (assoc_laguerre, (-1, 0, 0.0))])
def test_negative_or_fractional_degree_rejected(fn, args):
    with pytest.raises(ValueError):
        fn(*args)


@pytest.mark.parametrize("n", range(11))
@pytest.mark.parametrize("a", [Fraction(1, 2), Fraction(3, 2), Fraction(11, 4), Fraction(7)])
def test_gegenbauer_matches_series(n, a):
    for x in (Fraction(-9, 10), Fraction(-1, 3), Fraction(0), Fraction(2, 7), Fraction(1)):
        exact = float(gegenbauer_series(n, a, x))
        assert gegenbauer(n, float(a), float(x)) == pytest.approx(exact, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", range(11))
@pytest.mark.parametrize("a, b", [(Fraction(1, 2), Fraction(1, 2)), (Fraction(3, 2), Fraction(5, 2)),
                                  (Fraction(0), Fraction(2)), (Fraction(-1, 2), Fraction(7, 3))])
def test_jacobi_matches_series(n, a, b):
    for x in (Fraction(-1), Fraction(-1, 2), Fraction(1, 9), Fraction(3, 4)):
        exact = float(jacobi_series(n, a, b, x))
        assert jacobi(n, float(a), float(b), float(x)) == pytest.approx(exact, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", range(11))
def test_laguerre_matches_series(n):
    for k in (0, 1, 3):
        for x in (Fraction(0), Fraction(1, 2), Fraction(3), Fraction(17, 2)):
            exact = float(laguerre_series(n, k, x))
            assert assoc_laguerre(n, k, float(x)) == pytest.approx(exact, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("a", [10, 1000, 10000])
@pytest.mark.parametrize("n", range(6))
def test_large_index_against_series(a, n):
    a_frac = Fraction(a) + Fraction(1, 2)
    for x in (Fraction(-3, 10), Fraction(1, 100), Fraction(7, 10)):
        g = float(gegenbauer_series(n, a_frac, x))
        assert gegenbauer(n, float(a_frac), float(x)) == pytest.approx(g, rel=1e-12, abs=1e-300)
        j = float(jacobi_series(n, a_frac, Fraction(5, 2), x))
        assert jacobi(n, float(a_frac), 2.5, float(x)) == pytest.approx(j, rel=1e-10, abs=1e-12 * abs(j) + 1e-300)


def test_vectorised_evaluation():
    x = np.linspace(-1, 1, 7)
    out = jacobi(4, 1.5, 0.5, x)
    assert out.shape == x.shape
    assert np.allclose(out, [jacobi(4, 1.5, 0.5, float(t)) for t in x], rtol=0, atol=1e-15)


def test_log_gamma():
    assert log_gamma(1) == 0
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-14)
    assert log_gamma(6) == pytest.approx(math.log(120), rel=1e-14)
    for x in np.linspace(0.5, 100, 50):
        ref = float(sum(math.log(k) for k in range(1, int(x)))) if float(x).is_integer() else math.lgamma(x)
        assert log_gamma(float(x)) == pytest.approx(ref, rel=1e-12, abs=1e-14)
    for bad in (0, -1.5):
        with pytest.raises(ValueError):
            log_gamma(bad)


def test_gauss_legendre_examples():
    one = gauss_legendre(1)
    assert list(one.nodes) == [0.0] and list(one.weights) == [2.0]
    two = gauss_legendre(2)
    assert np.allclose(np.sort(two.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert np.allclose(two.weights, 1.0, atol=1e-15)
    assert gauss_legendre(20).integrate(lambda x: x ** 10) == pytest.approx(2 / 11, abs=1e-13)
    with pytest.raises(ValueError):
        gauss_legendre(0)


@given(st.integers(1, 80))
def test_gauss_legendre_exact_moments(order):
    rule = gauss_legendre(order)
    assert abs(rule.weights.sum() - 2) < 1e-13
    assert np.all(rule.weights > 0) and np.all(np.diff(rule.nodes) > 0)
    assert np.all(np.abs(rule.nodes) < 1)
    for k in range(0, 2 * order, max(1, order // 5)):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert abs(rule.integrate(lambda x: x ** k) - exact) < 1e-13


def test_gauss_legendre_against_numpy():
    for order in (3, 17, 64):
        rule = gauss_legendre(order)
        x, w = np.polynomial.legendre.leggauss(order)
        assert np.allclose(rule.nodes, x, atol=1e-14) and np.allclose(rule.weights, w, atol=1e-14)


def _orthogonality(values, weights):
    gram = (values * weights) @ values.T
    diag = np.sqrt(np.abs(np.diag(gram)))
    off = gram / np.outer(diag, diag)
    np.fill_diagonal(off, 0.0)
    return np.max(np.abs(off))


@pytest.mark.parametrize("a, b", [(0, 0), (1, 2), (3, 1), (2.5, 0.5), (0.5, 4.5)])
def test_jacobi_orthogonality(a, b):
    # substitute x = cos(t) so the half-integer weights become smooth
    t, wt = gauss_legendre(200).mapped(0.0, math.pi)
    x = np.cos(t)
    weights = wt * np.sin(t) * (1 - x) ** a * (1 + x) ** b
    values = np.array([jacobi(n, a, b, x) for n in range(13)])
    assert _orthogonality(values, weights) < 1e-10


@pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 3.7, 12.0])
def test_gegenbauer_orthogonality(a):
    t, wt = gauss_legendre(200).mapped(-math.pi / 2, math.pi / 2)
    x = np.sin(t)
    weights = wt * np.cos(t) ** (2 * a)
    values = np.array([gegenbauer(n, a, x) for n in range(13)])
    assert _orthogonality(values, weights) < 1e-10


_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def _fd(fun, x, h=1e-3):
    samples = np.array([fun(x + k * h) for k in range(-4, 5)])
    return samples[4], _D1 @ samples / h, _D2 @ samples / h ** 2


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_family_odes(n):
    x = np.linspace(-0.85, 0.85, 29)
    a = 1.75
    f, d1, d2 = _fd(lambda t: gegenbauer(n, a, t), x)
    res = (1 - x * x) * d2 - (2 * a + 1) * x * d1 + n * (n + 2 * a) * f
    assert np.max(np.abs(res)) / np.max(np.abs(f)) < 1e-7
    a, b = 2.5, 0.5
    f, d1, d2 = _fd(lambda t: jacobi(n, a, b, t), x)
    res = (1 - x * x) * d2 + (b - a - (a + b + 2) * x) * d1 + n * (n + a + b + 1) * f
    assert np.max(np.abs(res)) / np.max(np.abs(f)) < 1e-7
    xl = np.linspace(0.5, 6, 23)
    f, d1, d2 = _fd(lambda t: assoc_laguerre(n, 1, t), xl)
    res = xl * d2 + (2 - xl) * d1 + n * f
    assert np.max(np.abs(res)) / np.max(np.abs(f)) < 1e-7
