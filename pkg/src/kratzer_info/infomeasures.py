"""Fisher information, Shannon entropy, Fisher-Shannon complexity and the
uncertainty bounds they obey.

Entropies are full three-dimensional quantities: the radial part plus the
entropy of |Y_lm|^2 on the unit sphere (normalized to one).  Fisher
informations follow the separable form

    I_r = 4 <p^2> - 2 (2l+1) |m| <r^-2>,
    I_p = 4 <r^2> - 2 (2l+1) |m| <p^-2>,

with every moment except <p^-2> in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .kratzer import BoundState, _log_radial_density, dpsi_radial, psi_radial, radial_integral
from .moments import expect_inv_r2, expect_p2, expect_r2, expect_xi_r
from .pspace import MomentumDensity, momentum_density_grid, momentum_entropy_radial, momentum_transform, pmoment
from .specfun import assoc_laguerre_scaled, legendre_roots, sph_harm_sq

__all__ = [
    "DEFAULT_B_VALUES",
    "BOUND_EPS",
    "MeasureSet",
    "ShannonDecomposition",
    "BoundCheck",
    "fisher_r_analytic",
    "fisher_r_quadrature",
    "fisher_p",
    "fisher_p_quadrature",
    "shannon_angular",
    "shannon_radial",
    "shannon_r",
    "shannon_p",
    "shannon_decomposition",
    "complexity",
    "fisher_bound",
    "entropic_bound",
    "heisenberg_bound",
    "check_bounds",
    "measure_set",
]

DEFAULT_B_VALUES = (2.0 / 3.0, 1.0)
BOUND_EPS = 1e-6

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ShannonDecomposition:
    """Pieces of <ln rho> = S1 + S2 + S3 + S4 + S5.

    S1 = ln N^2, S2 = -<xi r>, S3 = 2 beta <ln r>, S4 = <ln L^2> and
    S5 = int |Y|^2 ln |Y|^2 dOmega, so the full entropy is minus their sum.
    """

    S1: float
    S2: float
    S3: float
    S4: float
    S5: float

    @property
    def radial_entropy(self) -> float:
        return -(self.S1 + self.S2 + self.S3 + self.S4)

    @property
    def total(self) -> float:
        return self.radial_entropy - self.S5


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    bound: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class MeasureSet:
    """All information measures of one state.

    ``complexities`` is keyed by (space, b) with space in {"r", "p"}.
    ``methods`` records how each Fisher value was obtained.
    """

    name: str
    n: int
    l: int
    m: int
    I_r: float
    I_p: float
    S_r: float
    S_p: float
    r2: float
    p2: float
    complexities: dict = field(default_factory=dict)
    methods: dict = field(default_factory=dict)

    @property
    def I_t(self) -> float:
        return self.I_r * self.I_p

    @property
    def S_t(self) -> float:
        return self.S_r + self.S_p

    @property
    def bound_margins(self) -> dict:
        return {c.name: c.margin for c in check_bounds(self)}


# Fisher information


def _centrifugal_m(l: int, m: int) -> float:
    return 2.0 * (2 * l + 1) * abs(m)


def fisher_r_analytic(state: BoundState) -> float:
    """I_r from closed-form <p^2> and <r^-2>."""
    out = 4.0 * expect_p2(state)
    if state.m:
        out -= _centrifugal_m(state.l, state.m) * expect_inv_r2(state)
    return out


def fisher_r_quadrature(state: BoundState, rtol: float = 1e-12) -> float:
    """I_r from the gradient form of the radial and angular derivatives.

    4 int psi'^2 r^2 dr + 4 l(l+1) <r^-2>, less the |m| term; all integrals by
    quadrature over the radial support.
    """
    def grad(r):
        d = dpsi_radial(state, r)
        with np.errstate(under="ignore"):
            return np.exp(2.0 * d.log_magnitude + 2.0 * np.log(r))

    def inv_r2(r):
        return np.exp(_log_radial_density(state, r)) / (r * r)

    g = radial_integral(state, grad, rtol=rtol).value
    c = radial_integral(state, inv_r2, rtol=rtol).value
    l = state.l
    return 4.0 * g + (4.0 * l * (l + 1) - _centrifugal_m(l, state.m)) * c


def fisher_p(state: BoundState, md: MomentumDensity | None = None) -> tuple[float, str]:
    """I_p and the method tag ("analytic" for m = 0, "numeric" otherwise)."""
    base = 4.0 * expect_r2(state)
    if state.m == 0:
        return base, "analytic"
    if md is None:
        raise ValueError(f"a momentum density is required for m={state.m}")
    if md.l != state.l:
        raise ValueError(f"momentum density built for l={md.l}, state has l={state.l}")
    return base - _centrifugal_m(state.l, state.m) * pmoment(md, -2), "numeric"


def fisher_p_quadrature(state: BoundState, md: MomentumDensity) -> float:
    """I_p from the momentum-space gradient form on the stored grid.

    4 [int Xi'^2 p^2 dp + l(l+1) int Xi^2 dp], less the |m| term.
    """
    p, w = md.p_grid, md.weights
    dxi = momentum_transform(state, p, derivative=True)
    grad = float(np.dot(w, dxi**2 * p**2))
    l = state.l
    out = 4.0 * grad + 4.0 * l * (l + 1) * pmoment(md, -2)
    return out - _centrifugal_m(l, state.m) * pmoment(md, -2)


# Shannon entropy


def _xlogx(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = v[pos] * np.log(v[pos])
    return out


def shannon_angular(l: int, m: int) -> float:
    """-int |Y_lm|^2 ln |Y_lm|^2 dOmega over the unit sphere."""
    if abs(m) > l:
        raise ValueError(f"|m| must not exceed l, got l={l}, m={m}")

    def integrand(x):
        return _xlogx(sph_harm_sq(l, m, np.arccos(np.clip(x, -1.0, 1.0))))

    res = quadrature.integrate_interval(integrand, -1.0, 1.0, tol=1e-12,
                                        splits=legendre_roots(l, m))
    return -2.0 * math.pi * res.value


def shannon_radial(state: BoundState, rtol: float = 1e-12) -> float:
    """-int psi^2 ln(psi^2) r^2 dr, with ln psi^2 taken from the log domain."""
    def integrand(r):
        psi = psi_radial(state, r)
        lm = psi.log_magnitude
        out = np.zeros_like(lm)
        ok = np.isfinite(lm)
        out[ok] = np.exp(2.0 * lm[ok] + 2.0 * np.log(r[ok])) * 2.0 * lm[ok]
        return out

    return -radial_integral(state, integrand, tol=1e-14, rtol=rtol).value


def shannon_r(state: BoundState) -> float:
    return shannon_radial(state) + shannon_angular(state.l, state.m)


def shannon_p(state: BoundState, md: MomentumDensity) -> float:
    return momentum_entropy_radial(md) + shannon_angular(state.l, state.m)


def shannon_decomposition(state: BoundState) -> ShannonDecomposition:
    """Split <ln rho> into normalization, exponential, power, Laguerre and angular parts."""
    s1 = 2.0 * state.log_norm
    s2 = -expect_xi_r(state)

    def weight(r):
        return np.exp(_log_radial_density(state, r))

    def ln_t(r):
        return weight(r) * np.log(state.xi * r)

    def ln_lag(r):
        lag = assoc_laguerre_scaled(state.n, state.alpha, state.xi * r)
        lm = lag.log_magnitude
        out = np.zeros_like(lm)
        ok = np.isfinite(lm)
        out[ok] = weight(r[ok]) * 2.0 * lm[ok]
        return out

    # 2 beta <ln r> = 2 beta (<ln t> - ln xi), with t = xi r
    mean_ln_t = radial_integral(state, ln_t, tol=1e-14).value
    s3 = 2.0 * state.beta * (mean_ln_t - math.log(state.xi))
    s4 = radial_integral(state, ln_lag, tol=1e-14).value if state.n else 0.0
    s5 = -shannon_angular(state.l, state.m)
    return ShannonDecomposition(s1, s2, s3, s4, s5)


# complexity and bounds


def complexity(I: float, S: float, b: float) -> float:
    """Fisher-Shannon complexity I exp(b S); inf once it exceeds the float range."""
    if not I > 0:
        raise ValueError(f"Fisher information must be positive, got {I}")
    bs = b * S
    if abs(bs) > 500.0:
        log_c = math.log(I) + bs
        return math.exp(log_c) if log_c < _LOG_FLOAT_MAX else math.inf
    return I * math.exp(bs)


def fisher_bound(l: int, m: int, D: int = 3) -> float:
    """Lower bound on I_r I_p for a D-dimensional central-potential state."""
    if abs(m) > l:
        raise ValueError(f"|m| must not exceed l, got l={l}, m={m}")
    if D < 3:
        raise ValueError("D must be at least 3")
    L = l + (D - 3) / 2.0
    return 16.0 * (1.0 - 2.0 * abs(m) / (2.0 * L + 1.0)) ** 2 * (L + 1.5) ** 2


def entropic_bound(d: int = 3) -> float:
    """d (1 + ln pi), the lower bound on S_r + S_p."""
    return d * (1.0 + math.log(math.pi))


def heisenberg_bound(l: int) -> float:
    return (l + 1.5) ** 2


def check_bounds(ms: MeasureSet, eps: float = BOUND_EPS) -> list[BoundCheck]:
    checks = []
    for name, value, bound in (
        ("fisher", ms.I_t, fisher_bound(ms.l, ms.m)),
        ("entropic", ms.S_t, entropic_bound()),
        ("heisenberg", ms.r2 * ms.p2, heisenberg_bound(ms.l)),
    ):
        margin = value - bound
        checks.append(BoundCheck(name, value, bound, margin, margin >= -eps))
    return checks


def measure_set(state: BoundState, md: MomentumDensity | None = None,
                b_values=DEFAULT_B_VALUES) -> MeasureSet:
    """Compute every measure of ``state``; ``md`` is built when not supplied."""
    if md is None:
        md = momentum_density_grid(state)
    I_r = fisher_r_analytic(state)
    I_p, p_method = fisher_p(state, md)
    S_r = shannon_r(state)
    S_p = shannon_p(state, md)
    comps = {}
    for b in b_values:
        comps[("r", b)] = complexity(I_r, S_r, b)
        comps[("p", b)] = complexity(I_p, S_p, b)
    return MeasureSet(
        name=state.name, n=state.n, l=state.l, m=state.m,
        I_r=I_r, I_p=I_p, S_r=S_r, S_p=S_p,
        r2=expect_r2(state), p2=expect_p2(state),
        complexities=comps,
        methods={"I_r": "analytic", "I_p": p_method, "S_r": "quadrature", "S_p": "numeric"},
    )
