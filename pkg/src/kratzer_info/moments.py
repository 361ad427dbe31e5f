"""Closed-form radial expectation values.

All of them reduce to the Laguerre integral

    int_0^inf t^(a+s) e^-t [L_n^a(t)]^2 dt = sum_i C(s, n-i)^2 Gamma(a+s+1+i) / i!

with a = 2 beta + 1, which is summed in the log domain because the gamma
arguments reach several hundred.
"""

from __future__ import annotations

import math

import numpy as np

from .kratzer import BoundState
from .specfun import gen_binomial, log_gamma

__all__ = [
    "log_laguerre_moment",
    "laguerre_moment",
    "expect_inv_r",
    "expect_inv_r2",
    "expect_r2",
    "expect_xi_r",
    "expect_p2",
    "log_laguerre_moment_terms",
]


def log_laguerre_moment_terms(n: int, alpha: float, shift: int) -> list[float]:
    """Logs of the non-zero terms of the Laguerre moment sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not alpha + shift + 1 > 0:
        raise ValueError(f"divergent moment: alpha + shift = {alpha + shift} <= -1")
    terms = []
    for i in range(n + 1):
        c = gen_binomial(shift, n - i)
        if c == 0.0:
            continue
        terms.append(2.0 * math.log(abs(c)) + log_gamma(alpha + shift + 1 + i) - log_gamma(i + 1))
    return terms


def log_laguerre_moment(n: int, alpha: float, shift: int) -> float:
    """ln of int t^(alpha+shift) e^-t [L_n^alpha]^2 dt."""
    terms = np.array(log_laguerre_moment_terms(n, alpha, shift))
    top = terms.max()
    return float(top + math.log(math.fsum(np.exp(terms - top))))


def laguerre_moment(n: int, alpha: float, shift: int) -> float:
    """The Laguerre moment itself; overflows to inf for very large alpha."""
    log_val = log_laguerre_moment(n, alpha, shift)
    return math.exp(log_val) if log_val < 709.0 else math.inf


def _log_r_moment(state: BoundState, k: int) -> float:
    # ln <r^k> = ln N^2 - (2 beta + 3 + k) ln xi + ln M(n, 2 beta + 1, k + 1)
    return (2.0 * state.log_norm - (2.0 * state.beta + 3.0 + k) * math.log(state.xi)
            + log_laguerre_moment(state.n, state.alpha, k + 1))


def expect_inv_r(state: BoundState) -> float:
    # single-term case: Gamma(n + 2 beta + 2) / n!
    log_val = (2.0 * state.log_norm - (2.0 * state.beta + 2.0) * math.log(state.xi)
               + log_gamma(state.n + 2.0 * state.beta + 2.0) - log_gamma(state.n + 1))
    return math.exp(log_val)


def expect_inv_r2(state: BoundState) -> float:
    return math.exp(_log_r_moment(state, -2))


def expect_r2(state: BoundState) -> float:
    return math.exp(_log_r_moment(state, 2))


def expect_xi_r(state: BoundState) -> float:
    """<xi r>, the dimensionless first moment."""
    return math.exp(_log_r_moment(state, 1) + math.log(state.xi))


def expect_p2(state: BoundState) -> float:
    """<p^2> from the virial-type identity p^2 = 2 mu (H - v).

    With v = x/r + y/r^2 + z this is 2mu(E - z) - 2mu x <1/r> - 2mu y <1/r^2>,
    identical to the D0, r0 form for either parameterization.
    """
    mu, p = state.mu, state.params
    return (2.0 * mu * (state.energy - p.z)
            - 2.0 * mu * p.x * expect_inv_r(state)
            - 2.0 * mu * p.y * expect_inv_r2(state))
