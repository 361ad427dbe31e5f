"""Special functions used by the wavefunctions and their transforms.

Everything here takes real arguments and is vectorized over the continuous
argument (``t``, ``x`` or ``theta``); integer indices are scalars.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "ScaledValue",
    "log_gamma",
    "gen_binomial",
    "assoc_laguerre",
    "assoc_laguerre_scaled",
    "laguerre_roots",
    "assoc_legendre",
    "legendre_roots",
    "sph_harm_sq",
    "sph_bessel_j",
    "sph_bessel_jp",
    "sph_bessel_zeros",
]


class ScaledValue(NamedTuple):
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` marks an exact zero; its ``log_magnitude`` is ``-inf``.
    Both fields may be numpy arrays of equal shape.
    """

    log_magnitude: np.ndarray | float
    sign: np.ndarray | float

    def value(self):
        return self.sign * np.exp(self.log_magnitude)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gen_binomial(a: float, k: int) -> float:
    """Generalized binomial coefficient a(a-1)...(a-k+1)/k!."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for j in range(k):
        out *= (a - j) / (j + 1)
    return out


def _check_alpha(alpha: float) -> None:
    if not alpha > -1:
        raise ValueError(f"Laguerre order alpha must exceed -1, got {alpha}")


def assoc_laguerre(n: int, alpha: float, t):
    """L_n^alpha(t) by the three-term recurrence in n."""
    _check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be non-negative")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev
    cur = 1.0 + alpha - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
    return cur


_RESCALE = 1e150


def assoc_laguerre_scaled(n: int, alpha: float, t) -> ScaledValue:
    """Log-scaled L_n^alpha(t); safe against overflow for large alpha and t."""
    _check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be non-negative")
    t = np.asarray(t, dtype=float)
    logscale = np.zeros_like(t)
    prev = np.ones_like(t)
    cur = prev if n == 0 else 1.0 + alpha - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            prev = np.where(big, prev / _RESCALE, prev)
            cur = np.where(big, cur / _RESCALE, cur)
            logscale = logscale + np.where(big, math.log(_RESCALE), 0.0)
    sign = np.sign(cur)
    with np.errstate(divide="ignore"):
        logmag = np.log(np.abs(cur)) + logscale
    return ScaledValue(logmag, sign)


def laguerre_roots(n: int, alpha: float) -> np.ndarray:
    """All n zeros of L_n^alpha, sorted, refined to ~1e-14 relative."""
    _check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.empty(0)
    if n == 1:
        return np.array([1.0 + alpha])
    # all zeros lie below this bound
    upper = 2 * n + alpha + 2 + 2 * math.sqrt((n + 1) * (n + alpha + 1))
    npts = 50 * n
    while True:
        # quadratic spacing resolves the small zeros for alpha near -1
        grid = upper * np.linspace(0.0, 1.0, npts + 1)[1:] ** 2
        vals = assoc_laguerre(n, alpha, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if idx.size == n:
            break
        if npts > 10**6:
            raise RuntimeError(f"could not bracket the zeros of L_{n}^{alpha}")
        npts *= 4
    f = lambda x: float(assoc_laguerre(n, alpha, x))
    return np.array([brentq(f, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)
                     for i in idx])


def assoc_legendre(l: int, m: int, x):
    """P_l^m(x) including the Condon-Shortley phase, 0 <= m <= l."""
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1):
        raise ValueError("x must lie in [-1, 1]")
    # P_m^m = (-1)^m (2m-1)!! (1-x^2)^(m/2)
    pmm = np.ones_like(x)
    if m > 0:
        s = np.sqrt((1.0 - x) * (1.0 + x))
        fact = 1.0
        for _ in range(m):
            pmm = -pmm * fact * s
            fact += 2.0
    if l == m:
        return pmm
    pmm1 = x * (2 * m + 1) * pmm
    for ll in range(m + 2, l + 1):
        pmm, pmm1 = pmm1, ((2 * ll - 1) * x * pmm1 - (ll + m - 1) * pmm) / (ll - m)
    return pmm1


def legendre_roots(l: int, m: int) -> np.ndarray:
    """Zeros of P_l^m on the open interval (-1, 1), sorted (l - m of them)."""
    m = abs(m)
    count = l - m
    if count <= 0:
        return np.empty(0)
    npts = 64 * (count + 1)
    while True:
        grid = np.cos(np.linspace(math.pi, 0.0, npts + 1))[1:-1]
        vals = assoc_legendre(l, m, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if idx.size == count:
            break
        npts *= 4
    f = lambda x: float(assoc_legendre(l, m, x))
    return np.array([brentq(f, grid[i], grid[i + 1], xtol=1e-15) for i in idx])


def sph_harm_sq(l: int, m: int, theta):
    """|Y_lm(theta, phi)|^2 (independent of phi)."""
    am = abs(m)
    if am > l:
        raise ValueError(f"|m| must not exceed l, got l={l}, m={m}")
    c = (2 * l + 1) / (4 * math.pi) * math.exp(math.lgamma(l - am + 1) - math.lgamma(l + am + 1))
    p = assoc_legendre(l, am, np.cos(np.asarray(theta, dtype=float)))
    return c * p * p


def _sph_bessel_series(l: int, x: np.ndarray) -> np.ndarray:
    # x**l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    dfact = 1.0
    for k in range(1, 2 * l + 2, 2):
        dfact *= k
    z = -0.5 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 30):
        term = term * z / (k * (2 * l + 2 * k + 1))
        total = total + term
    return total * x**l / dfact


def _sph_bessel_miller(l: int, x: np.ndarray) -> np.ndarray:
    # downward recurrence from well above l, normalized against j0 or j1
    start = l + 20 + int(math.ceil(float(np.max(x)) if x.size else 0.0))
    jp1 = np.zeros_like(x)
    j = np.full_like(x, 1e-300)
    out = np.zeros_like(x)
    for k in range(start, 0, -1):
        jm1 = (2 * k + 1) / x * j - jp1
        jp1, j = j, jm1
        if k - 1 == l:
            out = j.copy()
        big = np.abs(j) > 1e250
        if np.any(big):
            j = np.where(big, j * 1e-250, j)
            jp1 = np.where(big, jp1 * 1e-250, jp1)
            out = np.where(big, out * 1e-250, out)
    # j, jp1 now hold the unnormalized j_0, j_1; normalize on the larger one
    j0 = np.sin(x) / x
    j1 = np.sin(x) / x**2 - np.cos(x) / x
    use0 = np.abs(j0) >= np.abs(j1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(use0, j0 / j, j1 / jp1)
    return out * scale


def sph_bessel_j(l: int, x):
    """Spherical Bessel function j_l(x) for x >= 0."""
    if l < 0:
        raise ValueError("l must be non-negative")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)

    small = x < 0.5
    if np.any(small):
        out[small] = _sph_bessel_series(l, x[small])

    up = (~small) & (x >= l)
    if np.any(up):
        xu = x[up]
        j0 = np.sin(xu) / xu
        if l == 0:
            out[up] = j0
        else:
            j1 = np.sin(xu) / xu**2 - np.cos(xu) / xu
            for k in range(1, l):
                j0, j1 = j1, (2 * k + 1) / xu * j1 - j0
            out[up] = j1

    mid = (~small) & (x < l)
    if np.any(mid):
        out[mid] = _sph_bessel_miller(l, x[mid])
    return out[0] if scalar else out


def sph_bessel_jp(l: int, x):
    """Derivative j_l'(x)."""
    x = np.asarray(x, dtype=float)
    if l == 0:
        return -sph_bessel_j(1, x)
    # (l j_{l-1} - (l+1) j_{l+1}) / (2l+1) avoids dividing by x
    return (l * sph_bessel_j(l - 1, x) - (l + 1) * sph_bessel_j(l + 1, x)) / (2 * l + 1)


def sph_bessel_zeros(l: int, x_max: float) -> np.ndarray:
    """Positive zeros of j_l below ``x_max``, sorted (x = 0 excluded)."""
    if x_max <= 0:
        return np.empty(0)
    # consecutive zeros are more than pi/2 apart for every l
    grid = np.linspace(0.0, x_max, max(16, int(8 * x_max / math.pi) + 2))[1:]
    vals = sph_bessel_j(l, grid)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    f = lambda x: float(sph_bessel_j(l, x))
    return np.array([brentq(f, grid[i], grid[i + 1], xtol=1e-14) for i in idx])
