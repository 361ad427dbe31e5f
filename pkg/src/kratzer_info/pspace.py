"""Momentum-space radial wavefunctions and densities.

After the angular integrations the transform is a spherical-Bessel
(Hankel-type) integral,

    Xi(p) = sqrt(2/pi) int_0^inf psi(r) j_l(p r) r^2 dr,

up to the phase i^-l, which is dropped because only |Xi|^2 is used.  The
radial wavefunction lives on a narrow shell around r0, so a composite
Kronrod rule on its support (panels no longer than one kernel period at the
largest momentum needed) evaluates the transform for whole arrays of
momenta at once.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from . import quadrature
from .kratzer import BoundState, _radial_breaks, psi_radial
from .moments import expect_p2
from .specfun import sph_bessel_j, sph_bessel_jp, sph_bessel_zeros

__all__ = [
    "MomentumDensity",
    "momentum_wavefunction",
    "momentum_transform",
    "momentum_density_grid",
    "pmoment",
    "momentum_entropy_radial",
    "write_density_csv",
]

_PREFAC = math.sqrt(2.0 / math.pi)
_MAX_BLOCK = 2_000_000  # matrix entries per kernel block
_NOISE_FLOOR = 1e-10  # relative to max |Xi| on the sampling grid


@dataclass(frozen=True)
class MomentumDensity:
    """Normalized radial momentum density on a composite Kronrod grid.

    ``density`` holds Pi(p) = |Xi(p)|^2 at the nodes ``p_grid``; integrals
    are ``sum(weights * f(p_grid))``.  ``norm_defect`` is |int Pi p^2 dp - 1|
    before renormalization, ``abs_error`` the Kronrod-vs-Gauss estimate for the
    momentum entropy, and ``zeros`` the located nodes of Xi.
    """

    l: int
    p_grid: np.ndarray
    weights: np.ndarray
    gauss_weights: np.ndarray
    density: np.ndarray
    p_max: float
    norm_defect: float
    abs_error: float
    zeros: np.ndarray
    refinements: int


def _radial_rule(state: BoundState, p_max: float, min_panels: int = 48):
    lo, hi = state.support
    width = hi - lo
    h = min(2.0 * math.pi / max(p_max, 1e-300), width / min_panels)
    edges = [lo, *[b for b in _radial_breaks(state) if lo < b < hi], hi]
    breaks = [lo]
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, math.ceil((b - a) / h))
        breaks.extend(np.linspace(a, b, k + 1)[1:])
    r, w = quadrature.composite_rule(breaks)
    psi = psi_radial(state, r)
    amp = psi.sign * np.exp(psi.log_magnitude)
    return r, w, amp


def momentum_transform(state: BoundState, p, derivative: bool = False) -> np.ndarray:
    """Xi(p) (or dXi/dp) for an array of momenta p >= 0."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p < 0):
        raise ValueError("momenta must be non-negative")
    r, w, amp = _radial_rule(state, float(p.max()) if p.size else 1.0)
    kernel = sph_bessel_jp if derivative else sph_bessel_j
    coef = w * amp * r**3 if derivative else w * amp * r**2
    out = np.empty_like(p)
    step = max(1, _MAX_BLOCK // r.size)
    for i in range(0, p.size, step):
        block = p[i:i + step]
        out[i:i + step] = kernel(state.l, np.outer(block, r).ravel()).reshape(block.size, r.size) @ coef
    return _PREFAC * out


def momentum_wavefunction(state: BoundState, p: float, tol: float = 1e-13) -> float:
    """Xi(p) at one momentum by adaptive quadrature.

    Panels are split at the nodes of psi and at the zeros of j_l(p r).
    """
    p = float(p)
    if p < 0:
        raise ValueError("p must be non-negative")
    lo, hi = state.support
    splits = list(_radial_breaks(state))
    if p > 0:
        splits.extend(sph_bessel_zeros(state.l, p * hi) / p)

    def integrand(r):
        psi = psi_radial(state, r)
        return psi.sign * np.exp(psi.log_magnitude + 2.0 * np.log(r)) * sph_bessel_j(state.l, p * r)

    res = quadrature.integrate_interval(integrand, lo, hi, tol=tol, splits=splits)
    return _PREFAC * res.value


def _locate_zeros(state: BoundState, p_max: float, r_hi: float):
    """Sign changes of Xi on (0, p_max], refined by vectorized bisection."""
    dp = math.pi / (8.0 * r_hi)
    grid = np.linspace(0.0, p_max, max(64, int(p_max / dp) + 2))[1:]
    vals = momentum_transform(state, grid)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    # sign flips among rounding-level tail values are not zeros of Xi
    floor = _NOISE_FLOOR * float(np.max(np.abs(vals)))
    idx = idx[np.maximum(np.abs(vals[idx]), np.abs(vals[idx + 1])) > floor]
    a, b = grid[idx], grid[idx + 1]
    fa = vals[idx]
    for _ in range(60):
        if a.size == 0:
            break
        mid = 0.5 * (a + b)
        fm = momentum_transform(state, mid)
        same = np.sign(fm) == np.sign(fa)
        a = np.where(same, mid, a)
        fa = np.where(same, fm, fa)
        b = np.where(same, b, mid)
        if np.all(b - a <= 4 * np.finfo(float).eps * b):
            break
    return 0.5 * (a + b), grid, vals


def _p_grid(zeros: np.ndarray, p_max: float, h: float):
    edges = [0.0, *zeros.tolist(), p_max]
    breaks = [0.0]
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        k = max(1, math.ceil((b - a) / h))
        breaks.extend(np.linspace(a, b, k + 1)[1:])
    p, w = quadrature.composite_rule(breaks)
    _, wg = quadrature.composite_rule(breaks, gauss=True)
    return p, w, wg


def _xlogx(d: np.ndarray) -> np.ndarray:
    out = np.zeros_like(d)
    pos = d > 0
    out[pos] = d[pos] * np.log(d[pos])
    return out


def _summaries(p, w, density):
    return np.array([
        np.dot(w, density * p**2),
        np.dot(w, density * p**4),
        -np.dot(w, _xlogx(density) * p**2),
    ])


def momentum_density_grid(state: BoundState, tol: float = 1e-9, tail_mass: float = 1e-9,
                          max_refinements: int = 6) -> MomentumDensity:
    """Tabulate the normalized radial momentum density of ``state``.

    The upper momentum starts at 8 sqrt(<p^2>) and grows until the density
    mass beyond it is below ``tail_mass``.  The grid is then halved until the
    norm, <p^2> and the momentum entropy change by less than ``tol``
    (relative) between successive refinements.
    """
    lo, hi = state.support
    p2 = expect_p2(state)
    p_max = 8.0 * math.sqrt(p2)
    while True:
        zeros, grid, vals = _locate_zeros(state, 1.25 * p_max, hi)
        beyond = grid >= p_max
        tail = np.trapezoid(vals[beyond] ** 2 * grid[beyond] ** 2, grid[beyond])
        if tail < tail_mass:
            break
        p_max *= 1.25
    zeros = zeros[zeros < p_max]

    h = 2.0 * math.pi / hi
    p, w, wg = _p_grid(zeros, p_max, h)
    dens = momentum_transform(state, p) ** 2
    prev = _summaries(p, w, dens)
    for level in range(1, max_refinements + 1):
        h *= 0.5
        p, w, wg = _p_grid(zeros, p_max, h)
        dens = momentum_transform(state, p) ** 2
        cur = _summaries(p, w, dens)
        if np.all(np.abs(cur - prev) <= tol * np.maximum(np.abs(cur), 1.0)):
            break
        prev = cur
    else:
        raise quadrature.QuadratureError(
            f"momentum grid for {state.name} {state.qn} did not settle within "
            f"{max_refinements} refinements",
            quadrature.QuadratureResult(float(cur[2]), float(np.max(np.abs(cur - prev))), p.size // 21))

    norm = float(cur[0])
    dens = dens / norm
    s_kron = -np.dot(w, _xlogx(dens) * p**2)
    s_gauss = -np.dot(wg, _xlogx(dens) * p**2)
    return MomentumDensity(
        l=state.l,
        p_grid=p,
        weights=w,
        gauss_weights=wg,
        density=dens,
        p_max=p_max,
        norm_defect=abs(norm - 1.0),
        abs_error=float(abs(s_kron - s_gauss)),
        zeros=zeros,
        refinements=level,
    )


def pmoment(md: MomentumDensity, k: int) -> float:
    """<p^k> = int Pi(p) p^(k+2) dp for k in {-2, 0, 2}."""
    if k not in (-2, 0, 2):
        raise ValueError(f"unsupported momentum moment k={k}")
    return float(np.dot(md.weights, md.density * md.p_grid ** (k + 2)))


def momentum_entropy_radial(md: MomentumDensity) -> float:
    """-int Pi ln Pi p^2 dp (radial part only)."""
    return float(-np.dot(md.weights, _xlogx(md.density) * md.p_grid**2))


def write_density_csv(md: MomentumDensity, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "Pi"])
    order = np.argsort(md.p_grid)
    for p, d in zip(md.p_grid[order], md.density[order]):
        writer.writerow([f"{p:.9g}", f"{d:.9g}"])
