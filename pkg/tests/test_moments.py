import math

import mpmath
import numpy as np
import pytest

from conftest import MOLECULES
from kratzer_info.kratzer import QuantumState, build_state, radial_expectation, state_for
from kratzer_info.molparams import PotentialParams
from kratzer_info.moments import (
    expect_inv_r,
    expect_inv_r2,
    expect_p2,
    expect_r2,
    expect_xi_r,
    laguerre_moment,
    log_laguerre_moment,
)

HYDROGEN = PotentialParams(-1.0, 0.0, 0.0)


@pytest.mark.parametrize("n,alpha,shift", [(0, 2.5, 0), (3, 2.5, 0), (3, 2.5, 2), (5, 342.2, -1), (4, 10.0, 3)])
def test_laguerre_moment_matches_mpmath(n, alpha, shift):
    mpmath.mp.dps = 30
    f = lambda t: t ** (alpha + shift) * mpmath.exp(-t) * mpmath.laguerre(n, alpha, t) ** 2
    ref = mpmath.quad(f, [0, alpha + 1, 2 * (alpha + 10), mpmath.inf])
    assert log_laguerre_moment(n, alpha, shift) == pytest.approx(float(mpmath.log(ref)), abs=1e-10)


def test_laguerre_moment_shift_zero_identity():
    # (n + alpha)! / n!
    for n, alpha in [(0, 1.0), (3, 4.5), (5, 342.2)]:
        expected = math.lgamma(n + alpha + 1) - math.lgamma(n + 1)
        assert log_laguerre_moment(n, alpha, 0) == pytest.approx(expected, rel=1e-14)


def test_laguerre_moment_overflow_guard():
    assert laguerre_moment(2, 400.0, 1) == math.inf
    assert laguerre_moment(2, 3.0, 1) < math.inf
    with pytest.raises(ValueError):
        log_laguerre_moment(1, 0.5, -2)


def test_hydrogen_moments():
    s = build_state(1.0, HYDROGEN, QuantumState(0, 0, 0))
    assert expect_inv_r(s) == pytest.approx(1.0, rel=1e-14)
    assert expect_inv_r2(s) == pytest.approx(2.0, rel=1e-14)
    assert expect_r2(s) == pytest.approx(3.0, rel=1e-14)
    assert expect_xi_r(s) == pytest.approx(3.0, rel=1e-14)
    assert expect_p2(s) == pytest.approx(1.0, rel=1e-14)


def test_hydrogen_2p_moments():
    s = build_state(1.0, HYDROGEN, QuantumState(0, 1, 0))
    assert expect_r2(s) == pytest.approx(30.0, rel=1e-13)
    assert expect_inv_r(s) == pytest.approx(0.25, rel=1e-13)


@pytest.mark.parametrize("name", list(MOLECULES))
@pytest.mark.parametrize("n,l", [(0, 0), (4, 3), (6, 6)])
def test_moments_against_quadrature(name, n, l):
    s = state_for(MOLECULES[name], n, l)
    for f, w in [(expect_inv_r, lambda r: 1 / r), (expect_inv_r2, lambda r: r**-2),
                 (expect_r2, lambda r: r**2), (expect_xi_r, lambda r: s.xi * r)]:
        assert radial_expectation(s, w) == pytest.approx(f(s), rel=1e-10)


def test_p2_kinetic_identity():
    # <p^2> = <-psi'' ...> checked through the gradient form
    # int psi'^2 r^2 + l(l+1) <r^-2>
    from kratzer_info.infomeasures import fisher_r_quadrature
    s = state_for(MOLECULES["O2+"], 2, 2)
    assert fisher_r_quadrature(s) / 4 == pytest.approx(expect_p2(s), rel=1e-10)


def test_o2_ground_state_p2():
    s = state_for(MOLECULES["O2"], 0, 0)
    assert expect_p2(s) == pytest.approx(65.367653 / 4, rel=5e-6)
    assert np.isfinite(expect_r2(s))
