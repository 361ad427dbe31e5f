import math

import mpmath
import numpy as np
import pytest
from scipy.special import roots_genlaguerre
from hypothesis import given, settings
from hypothesis import strategies as st

from kratzer_info import quadrature
from kratzer_info.specfun import (
    assoc_laguerre,
    assoc_laguerre_scaled,
    assoc_legendre,
    gen_binomial,
    laguerre_roots,
    legendre_roots,
    log_gamma,
    sph_bessel_j,
    sph_bessel_jp,
    sph_bessel_zeros,
    sph_harm_sq,
)

mpmath.mp.dps = 40


@pytest.mark.parametrize("x", [0.5, 1.0, 7.3, 343.2, 686.4, 1500.0])
def test_log_gamma_matches_mpmath(x):
    assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-14)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        log_gamma(0.0)


def test_gen_binomial():
    assert gen_binomial(3, 2) == 3
    assert gen_binomial(2, 3) == 0
    for k in range(6):
        assert gen_binomial(-1, k) == (-1) ** k
    assert gen_binomial(0.5, 2) == pytest.approx(-0.125)


@pytest.mark.parametrize("n,alpha,t", [(0, 2.5, 3.0), (1, 0.0, 2.0), (3, 2.5, 1.7), (5, 342.2, 300.0),
                                       (10, 410.0, 455.0), (7, 0.0, 20.0)])
def test_assoc_laguerre_matches_mpmath(n, alpha, t):
    ref = float(mpmath.laguerre(n, alpha, t))
    assert float(assoc_laguerre(n, alpha, t)) == pytest.approx(ref, rel=1e-10)
    scaled = assoc_laguerre_scaled(n, alpha, t)
    assert scaled.value() == pytest.approx(ref, rel=1e-10)


def test_laguerre_closed_forms():
    t = np.linspace(0, 5, 11)
    assert np.allclose(assoc_laguerre(0, 1.3, t), 1.0)
    assert np.allclose(assoc_laguerre(1, 1.3, t), 2.3 - t)


def test_laguerre_scaled_survives_overflow():
    # L_10^600 at the origin is C(610, 10) ~ 1e20 and grows like t^10 beyond
    val = assoc_laguerre_scaled(10, 600.0, 1e40)
    assert np.isfinite(val.log_magnitude)
    assert val.log_magnitude == pytest.approx(400 * math.log(10) - math.lgamma(11), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 9), alpha=st.floats(0.0, 500.0), t=st.floats(0.0, 1000.0))
def test_laguerre_recurrence(n, alpha, t):
    lm1 = float(assoc_laguerre(n - 1, alpha, t))
    l0 = float(assoc_laguerre(n, alpha, t))
    lp1 = float(assoc_laguerre(n + 1, alpha, t))
    lhs = (n + 1) * lp1
    rhs = (2 * n + 1 + alpha - t) * l0 - (n + alpha) * lm1
    scale = max(abs(lhs), abs((2 * n + 1 + alpha - t) * l0), abs((n + alpha) * lm1), 1e-300)
    assert abs(lhs - rhs) <= 1e-10 * scale


@pytest.mark.parametrize("n,alpha", [(1, 2.5), (3, 2.5), (5, 342.2), (10, 0.0), (4, -0.5)])
def test_laguerre_roots(n, alpha):
    roots = laguerre_roots(n, alpha)
    ref, _ = roots_genlaguerre(n, alpha)
    assert roots.size == n
    assert np.all(np.diff(roots) > 0)
    assert roots == pytest.approx(np.sort(ref), rel=1e-10)


def test_laguerre_roots_edge_cases():
    assert laguerre_roots(0, 3.0).size == 0
    assert laguerre_roots(1, 3.0) == pytest.approx([4.0])
    with pytest.raises(ValueError):
        laguerre_roots(2, -1.5)


@pytest.mark.parametrize("n,k", [(0, 0), (2, 2), (3, 1), (5, 5), (4, 2)])
@pytest.mark.parametrize("alpha", [0.0, 2.5, 342.2])
def test_laguerre_orthogonality(n, k, alpha):
    # weight divided by sqrt(h_n h_k) so the result is the Kronecker delta
    def log_h(j):
        return math.lgamma(j + alpha + 1) - math.lgamma(j + 1)

    shift = 0.5 * (log_h(n) + log_h(k))

    def f(t):
        return np.exp(alpha * np.log(t) - t - shift) * assoc_laguerre(n, alpha, t) \
            * assoc_laguerre(k, alpha, t)

    res = quadrature.integrate_semiinf(f, splits=[alpha + 1], scale=1.0, power=alpha + 2 * max(n, k),
                                       tol=1e-11)
    assert res.value == pytest.approx(1.0 if n == k else 0.0, abs=1e-9)


@pytest.mark.parametrize("l,m,x", [(0, 0, 0.3), (1, 0, 0.3), (1, 1, 0.3), (5, 3, -0.7), (6, 6, 0.1)])
def test_assoc_legendre_matches_mpmath(l, m, x):
    assert float(assoc_legendre(l, m, x)) == pytest.approx(float(mpmath.legenp(l, m, x)), rel=1e-12)


def test_assoc_legendre_validation():
    with pytest.raises(ValueError):
        assoc_legendre(1, 2, 0.0)
    with pytest.raises(ValueError):
        assoc_legendre(2, 1, 1.5)


def test_legendre_roots():
    assert legendre_roots(1, 0) == pytest.approx([0.0], abs=1e-14)
    roots = legendre_roots(5, 2)
    assert roots.size == 3
    assert np.allclose(assoc_legendre(5, 2, roots), 0.0, atol=1e-12)


def test_sph_harm_sq_values():
    assert float(sph_harm_sq(0, 0, 1.234)) == pytest.approx(1 / (4 * math.pi))
    assert float(sph_harm_sq(1, 0, math.pi / 2)) == pytest.approx(0.0, abs=1e-30)
    assert float(sph_harm_sq(1, 1, 0.4)) == pytest.approx(3 / (8 * math.pi) * math.sin(0.4) ** 2)


@pytest.mark.parametrize("l", range(7))
def test_sph_harm_sq_normalized(l):
    for m in range(-l, l + 1):
        res = quadrature.integrate_interval(lambda th: sph_harm_sq(l, m, th) * np.sin(th), 0.0, math.pi,
                                            tol=1e-14)
        assert 2 * math.pi * res.value == pytest.approx(1.0, abs=1e-10)


def test_sph_bessel_closed_forms():
    x = np.array([0.1, 0.7, 3.0, 25.0])
    assert np.allclose(sph_bessel_j(0, x), np.sin(x) / x, rtol=1e-14)
    assert float(sph_bessel_j(0, 0.0)) == 1.0
    assert float(sph_bessel_j(1, 1e-4)) == pytest.approx(1e-4 / 3, rel=1e-8)
    assert float(sph_bessel_j(3, 0.0)) == 0.0


@pytest.mark.parametrize("l", [0, 1, 2, 5, 8, 10])
def test_sph_bessel_matches_mpmath(l):
    xs = [0.05, 0.4, 0.6, 1.5, 3.1415926, 7.2, 12.0, 40.0, 300.0]
    for x in xs:
        ref = float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.besselj(l + 0.5, x))
        got = float(sph_bessel_j(l, x))
        tol = 1e-12 if x > l / 2 else 1e-10
        assert got == pytest.approx(ref, rel=tol, abs=1e-300), (l, x)


def test_sph_bessel_l5_at_7_2():
    ref = float(mpmath.sqrt(mpmath.pi / (2 * 7.2)) * mpmath.besselj(5.5, 7.2))
    assert float(sph_bessel_j(5, 7.2)) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("l", [0, 1, 4])
def test_sph_bessel_derivative(l):
    x = np.array([0.3, 2.0, 9.5])
    h = 1e-5
    fd = (sph_bessel_j(l, x + h) - sph_bessel_j(l, x - h)) / (2 * h)
    assert np.allclose(sph_bessel_jp(l, x), fd, atol=1e-9)


def test_sph_bessel_zeros():
    zeros = sph_bessel_zeros(0, 10.0)
    assert zeros == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], rel=1e-13)
    z1 = sph_bessel_zeros(2, 20.0)
    assert np.allclose(sph_bessel_j(2, z1), 0.0, atol=1e-13)
    assert sph_bessel_zeros(1, -1.0).size == 0
