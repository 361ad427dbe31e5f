"""Exact bound states of v(r) = x/r + y/r**2 + z.

The radial functions are

    psi(r) = N exp(-xi r / 2) r**beta L_n^(2 beta + 1)(xi r)

with beta ~ 170 for real diatomics, so every factor is carried as a
logarithm and only combined at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import quadrature
from .molparams import MoleculeSpec, PotentialForm, PotentialParams, potential_params
from .specfun import (
    ScaledValue,
    assoc_laguerre_scaled,
    laguerre_roots,
    log_gamma,
    sph_harm_sq,
)

__all__ = [
    "MAX_QUANTUM_NUMBER",
    "QuantumState",
    "BoundState",
    "potential_value",
    "beta_ell",
    "energy",
    "build_state",
    "state_for",
    "psi_radial",
    "dpsi_radial",
    "density_r",
    "radial_nodes",
    "radial_support",
    "radial_integral",
    "radial_expectation",
    "schrodinger_residual",
]

MAX_QUANTUM_NUMBER = 10

# log-density drop (nats) below the peak at which the radial range is cut
SUPPORT_LOG_CUT = 80.0


@dataclass(frozen=True)
class QuantumState:
    n: int
    l: int
    m: int = 0

    def __post_init__(self):
        if self.n < 0 or self.l < 0:
            raise ValueError(f"n and l must be non-negative, got n={self.n}, l={self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l, got l={self.l}, m={self.m}")
        if self.n > MAX_QUANTUM_NUMBER or self.l > MAX_QUANTUM_NUMBER:
            raise ValueError(f"n and l are validated only up to {MAX_QUANTUM_NUMBER}")

    def __str__(self):
        return f"({self.n},{self.l},{self.m})"


@dataclass(frozen=True)
class BoundState:
    mu: float
    params: PotentialParams
    qn: QuantumState
    beta: float
    xi: float
    energy: float
    log_norm: float
    molecule: MoleculeSpec | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.qn.n

    @property
    def l(self) -> int:
        return self.qn.l

    @property
    def m(self) -> int:
        return self.qn.m

    @property
    def alpha(self) -> float:
        """Laguerre order 2 beta + 1."""
        return 2.0 * self.beta + 1.0

    @property
    def name(self) -> str:
        return self.molecule.name if self.molecule is not None else "custom"

    @cached_property
    def nodes(self) -> np.ndarray:
        return radial_nodes(self)

    @cached_property
    def support(self) -> tuple[float, float]:
        return radial_support(self)


def potential_value(params: PotentialParams, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    return params.x / r + params.y / r**2 + params.z


def beta_ell(mu: float, y: float, l: int) -> float:
    disc = (2 * l + 1) ** 2 + 8.0 * mu * y
    if disc < 0:
        raise ValueError(f"negative discriminant {disc}: unphysical y={y}")
    return 0.5 * (-1.0 + math.sqrt(disc))


def energy(mu: float, params: PotentialParams, n: int, l: int) -> float:
    b = beta_ell(mu, params.y, l)
    return -mu * params.x**2 / (2.0 * (n + b + 1.0) ** 2) + params.z


def build_state(mu: float, params: PotentialParams, qn: QuantumState,
                molecule: MoleculeSpec | None = None) -> BoundState:
    n = qn.n
    b = beta_ell(mu, params.y, qn.l)
    # xi = sqrt(-8 mu (E - z)) simplifies to 2 mu |x| / (n + beta + 1)
    xi = 2.0 * mu * abs(params.x) / (n + b + 1.0)
    e = energy(mu, params, n, qn.l)
    log_norm2 = ((2 * b + 3) * math.log(xi) - math.log(2.0) + log_gamma(n + 1)
                 - math.log(n + b + 1) - log_gamma(n + 2 * b + 2))
    return BoundState(mu, params, qn, b, xi, e, 0.5 * log_norm2, molecule)


def state_for(molecule: MoleculeSpec, n: int, l: int, m: int = 0,
              form: PotentialForm = PotentialForm.MIE) -> BoundState:
    return build_state(molecule.mu, potential_params(molecule, form),
                       QuantumState(n, l, m), molecule)


def _check_r(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    return r


def psi_radial(state: BoundState, r) -> ScaledValue:
    r = _check_r(r)
    lag = assoc_laguerre_scaled(state.n, state.alpha, state.xi * r)
    logmag = state.log_norm - 0.5 * state.xi * r + state.beta * np.log(r) + lag.log_magnitude
    return ScaledValue(logmag, lag.sign)


def dpsi_radial(state: BoundState, r) -> ScaledValue:
    """d psi / dr, using dL_n^a/dt = -L_{n-1}^{a+1}."""
    r = _check_r(r)
    t = state.xi * r
    lag = assoc_laguerre_scaled(state.n, state.alpha, t)
    coef = state.beta - 0.5 * t
    if state.n == 0:
        bracket_log = lag.log_magnitude + np.log(np.abs(coef))
        bracket_sign = lag.sign * np.sign(coef)
    else:
        der = assoc_laguerre_scaled(state.n - 1, state.alpha + 1, t)
        ref = np.maximum(lag.log_magnitude, der.log_magnitude)
        val = (coef * lag.sign * np.exp(lag.log_magnitude - ref)
               - t * der.sign * np.exp(der.log_magnitude - ref))
        with np.errstate(divide="ignore"):
            bracket_log = ref + np.log(np.abs(val))
        bracket_sign = np.sign(val)
    logmag = state.log_norm - 0.5 * t + (state.beta - 1.0) * np.log(r) + bracket_log
    return ScaledValue(logmag, bracket_sign)


def density_r(state: BoundState, r, theta):
    """|Psi(r, theta, phi)|^2."""
    psi = psi_radial(state, r)
    return np.exp(2.0 * psi.log_magnitude) * sph_harm_sq(state.l, state.m, theta)


def radial_nodes(state: BoundState) -> np.ndarray:
    return laguerre_roots(state.n, state.alpha) / state.xi


def _log_radial_density(state: BoundState, r):
    # log of psi^2 r^2
    return 2.0 * psi_radial(state, r).log_magnitude + 2.0 * np.log(r)


def radial_support(state: BoundState, log_cut: float = SUPPORT_LOG_CUT) -> tuple[float, float]:
    """Radial interval outside which psi^2 r^2 is below exp(-log_cut) of its peak.

    The lower end is 0 when the density near the origin never drops that far
    within the sampled range (hydrogen-like states).
    """
    nodes = laguerre_roots(state.n, state.alpha)
    t_far = max(2.0 * state.beta + 2.0 + 2 * state.n, nodes[-1] if nodes.size else 0.0)
    t_far = 2.0 * t_far + 10.0
    npts = 4000
    while True:
        t = np.linspace(0.0, t_far, npts + 1)[1:]
        g = _log_radial_density(state, t / state.xi)
        gmax = float(np.max(g))
        if g[-1] < gmax - log_cut:
            break
        t_far *= 2.0
    keep = np.nonzero(g >= gmax - log_cut)[0]
    level = gmax - log_cut

    def refine(lo, hi, rising):
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            above = _log_radial_density(state, mid / state.xi) >= level
            if above == rising:
                hi = mid
            else:
                lo = mid
        return lo if rising else hi

    if keep[0] == 0:
        t_lo = 0.0
    else:
        t_lo = refine(t[keep[0] - 1], t[keep[0]], rising=True)
    t_hi = refine(t[keep[-1]], t[keep[-1] + 1], rising=False)
    return t_lo / state.xi, t_hi / state.xi


def _radial_breaks(state: BoundState) -> list[float]:
    lo, hi = state.support
    peak = 2.0 * (state.beta + 1.0) / state.xi
    pts = [float(v) for v in state.nodes]
    # for n = 1 the single node sits exactly on the envelope peak
    gap = 1e-6 * (hi - lo)
    if lo < peak < hi and all(abs(peak - v) > gap for v in pts):
        pts.append(peak)
    return sorted(pts)


def radial_integral(state: BoundState, func, tol: float = 0.0, rtol: float = 1e-12,
                    splits=()) -> quadrature.QuadratureResult:
    """Integrate ``func(r)`` over the radial support, split at the nodes of psi."""
    lo, hi = state.support
    return quadrature.integrate_interval(
        func, lo, hi, tol=tol, rtol=rtol, splits=[*_radial_breaks(state), *splits])


def radial_expectation(state: BoundState, weight, tol: float = 0.0, rtol: float = 1e-12) -> float:
    """<weight(r)> = int psi^2 weight(r) r^2 dr by quadrature."""
    def integrand(r):
        return np.exp(_log_radial_density(state, r)) * weight(r)
    return radial_integral(state, integrand, tol=tol, rtol=rtol).value


def _fd_step(state: BoundState) -> float:
    width = math.sqrt(state.beta + state.n + 1.0) / state.xi
    gaps = np.diff(np.concatenate([[0.0], state.nodes]))
    scale = min(width, float(gaps.min())) if gaps.size else width
    return 0.01 * scale


def schrodinger_residual(state: BoundState, r: float, h: float | None = None) -> float:
    """Relative residual of the reduced radial equation for u = r psi.

    |-(1/2mu) u'' + [l(l+1)/(2 mu r^2) + v(r)] u - E u| / |E u| with u''
    from the five-point central difference of step ``h``.
    """
    r = float(r)
    if r <= 0:
        raise ValueError("r must be positive")
    nodes = state.nodes
    if nodes.size and np.min(np.abs(nodes - r)) <= 1e-3 / state.xi:
        raise ValueError(f"r={r} is too close to a node of psi")
    if h is None:
        h = _fd_step(state)
    h = min(h, 0.25 * r)
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    pts = r + offsets
    psi = psi_radial(state, pts)
    logu = psi.log_magnitude + np.log(pts)
    ratio = psi.sign * psi.sign[2] * np.exp(logu - logu[2])  # u(r+kh)/u(r)
    upp = (-ratio[0] + 16 * ratio[1] - 30 * ratio[2] + 16 * ratio[3] - ratio[4]) / (12 * h * h)
    mu, l = state.mu, state.l
    veff = l * (l + 1) / (2 * mu * r * r) + float(potential_value(state.params, r))
    resid = -upp / (2 * mu) + veff - state.energy
    return abs(resid) / abs(state.energy)
