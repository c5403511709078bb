"""Time evolution of a bound state released from the mirror at ``t = 0``.

The exact state is the oscillatory integral

    psi(z, t) = sqrt(alpha / (pi l_g)) * I,
    I = int_{a_n}^{chi_hi} Ai(chi) / Ai'(a_n) * exp(i alpha (chi - chi0)^2) dchi,

with ``alpha = m l_g^2 / (2 hbar t)`` and ``chi0 = (z - h_n + g t^2/2) / l_g``.
Everything inside the integral is dimensionless, so it behaves the same for
any mass.  ``I`` is computed on panels whose edges sit where the quadratic
phase crosses multiples of ``phase_per_panel``; each panel gets a 7/15-point
Gauss-Kronrod pair and panels are bisected until the summed Kronrod-Gauss
difference meets the tolerance.

Note that ``alpha = t_g / (4 t)`` with ``t_g = (2 hbar / (m g^2))^(1/3)``;
at a fixed time ``alpha`` falls like ``m^(-1/3)``.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import pi, sqrt
from typing import NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from .exceptions import DomainError, QuadratureError
from .scenario_b import GravEigenstate, eigenfunction, time_scales
from .specfun import airy, fresnel
from .specfun import _airy_values  # no per-call validation in the inner loop

__all__ = [
    "QuadratureConfig", "ComplexAmplitude", "StationaryPoint",
    "chi0", "phase_group", "spreading_length", "evolve_exact", "evolve_sd",
    "comoving_window", "norm_profile", "detector_profile", "peak_arrival_time",
    "classical_limit_check", "strong_ep_deviation", "sd_discrepancy", "relative_l2",
    "arrival_window", "structure_scale", "exact_density_spline",
    "AI_DECAY", "chi_decay",
]

# Gauss-Kronrod 7/15 (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

#: Truncate the integral where |Ai| drops below this fraction of its maximum.
AI_DECAY = 1e-12
_AI_MAX = 0.5356566560156999  # Ai(-1.0188...)
#: Widest panel allowed regardless of phase, in chi units.
_MAX_PANEL_WIDTH = 0.5


@dataclass(frozen=True)
class QuadratureConfig:
    chi_max: float = 16.0
    phase_per_panel: float = pi / 2
    rel_tol: float = 1e-6
    max_panels: int = 200_000

    def __post_init__(self):
        if not self.chi_max >= 10:
            raise ValueError("chi_max must be >= 10")
        if not 0 < self.phase_per_panel <= pi:
            raise ValueError("phase_per_panel must be in (0, pi]")
        if not 0 < self.rel_tol <= 1e-2:
            raise ValueError("rel_tol must be in (0, 1e-2]")
        if not self.max_panels >= 100:
            raise ValueError("max_panels must be >= 100")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class ComplexAmplitude:
    re: "float | np.ndarray"
    im: "float | np.ndarray"

    @property
    def density(self):
        return self.re * self.re + self.im * self.im

    @property
    def value(self):
        return self.re + 1j * self.im


class StationaryPoint(NamedTuple):
    chi0: "float | np.ndarray"


def _pack(psi):
    if np.ndim(psi) == 0:
        psi = complex(psi)
        return ComplexAmplitude(psi.real, psi.imag)
    return ComplexAmplitude(psi.real.copy(), psi.imag.copy())


def _check_time(t, allow_zero=False):
    t = np.asarray(t, dtype=float)
    ok = t >= 0 if allow_zero else t > 0
    if not np.all(ok & np.isfinite(t)):
        raise DomainError("t must be > 0" if not allow_zero else "t must be >= 0")
    return t


def chi0(state: GravEigenstate, z, t):
    """Stationary point of the quadratic phase, in units of ``l_g``."""
    t = _check_time(t, allow_zero=True)
    z = np.asarray(z, dtype=float)
    c = ((z + 0.5 * state.g * t * t) - state.h_n) / state.l_g
    return StationaryPoint(float(c) if c.ndim == 0 else c)


def phase_group(state: GravEigenstate, t):
    """``alpha = m l_g^2 / (2 hbar t)``."""
    return state.mass * state.l_g ** 2 / (2.0 * state.hbar * np.asarray(t, dtype=float))


def spreading_length(state: GravEigenstate, t):
    """``hbar t / (m l_g)``: far-field width scale of the released packet."""
    return state.hbar * t / (state.mass * state.l_g)


@lru_cache(maxsize=None)
def chi_decay():
    """chi above which |Ai| < AI_DECAY * max|Ai|."""
    target = AI_DECAY * _AI_MAX
    return brentq(lambda x: airy(x).ai - target, 5.0, 20.0, xtol=1e-12)


def _upper_limit(cfg):
    return min(cfg.chi_max, chi_decay())


@lru_cache(maxsize=256)
def _amplitude_l1(a_n, ai_prime_an, hi):
    """int |Ai(chi) / Ai'(a_n)| over [a_n, hi], for the absolute tolerance floor."""
    edges = np.arange(a_n, hi, 0.25)
    edges = np.append(edges, hi)
    x, w = np.polynomial.legendre.leggauss(10)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    vals = np.abs(_airy_values(nodes)[0]).reshape(-1, 10)
    return float(np.sum(vals @ w * half)) / abs(ai_prime_an)


def _phase_edges(lo, hi, c, alpha, dphi):
    """Points in (lo, hi) where alpha (chi - c)^2 crosses multiples of dphi."""
    out = []
    if hi > c:  # increasing branch
        p = max(lo, c)
        k0 = np.floor(alpha * (p - c) ** 2 / dphi) + 1
        k1 = np.ceil(alpha * (hi - c) ** 2 / dphi) - 1
        if k1 >= k0:
            out.append(c + np.sqrt(np.arange(k0, k1 + 1) * dphi / alpha))
    if lo < c:  # decreasing branch
        q = min(hi, c)
        k0 = np.floor(alpha * (q - c) ** 2 / dphi) + 1
        k1 = np.ceil(alpha * (lo - c) ** 2 / dphi) - 1
        if k1 >= k0:
            out.append(c - np.sqrt(np.arange(k0, k1 + 1) * dphi / alpha))
    if lo < c < hi:
        out.append(np.array([c]))
    return np.concatenate(out) if out else np.empty(0)


def _estimated_panels(lo, hi, c, alpha, dphi):
    phi = alpha * ((lo - c) ** 2 + (hi - c) ** 2)
    if lo < c < hi:
        return phi / dphi + (hi - lo) / _MAX_PANEL_WIDTH
    return alpha * abs((lo - c) ** 2 - (hi - c) ** 2) / dphi + (hi - lo) / _MAX_PANEL_WIDTH


def _gk_panels(a, b, c, alpha):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES
    ai = _airy_values(x.ravel())[0].reshape(x.shape)
    f = ai * np.exp(1j * alpha * (x - c) ** 2)
    k = (f @ _KW) * half
    g = (f @ _GW) * half
    return k, np.abs(k - g)


def _oscillatory_integral(lo, hi, c, alpha, cfg, abs_floor):
    """Return (I, error estimate, panel count) for one (chi0, alpha)."""
    need = _estimated_panels(lo, hi, c, alpha, cfg.phase_per_panel)
    if need > cfg.max_panels:
        raise QuadratureError(
            f"needs ~{need:.3g} panels, budget {cfg.max_panels}",
            error_estimate=np.inf, n_panels=0, chi0=c, alpha=alpha)
    edges = np.concatenate([
        [lo, hi], _phase_edges(lo, hi, c, alpha, cfg.phase_per_panel),
        np.arange(lo, hi, _MAX_PANEL_WIDTH)[1:],
    ])
    edges = np.unique(edges)
    edges = edges[np.concatenate([[True], np.diff(edges) > 1e-13 * max(1.0, abs(hi))])]
    a, b = edges[:-1], edges[1:]
    val, err = _gk_panels(a, b, c, alpha)
    while True:
        total = val.sum()
        err_total = err.sum()
        tol = max(cfg.rel_tol * abs(total), abs_floor)
        if err_total <= tol:
            return total, err_total, len(a)
        bad = err > tol / len(a)
        n_new = len(a) + int(bad.sum())
        if n_new > cfg.max_panels:
            raise QuadratureError(
                f"tolerance {tol:.3g} not reached within {cfg.max_panels} panels",
                error_estimate=err_total, n_panels=len(a), chi0=c, alpha=alpha)
        m = 0.5 * (a[bad] + b[bad])
        na = np.concatenate([a[bad], m])
        nb = np.concatenate([m, b[bad]])
        nv, ne = _gk_panels(na, nb, c, alpha)
        a = np.concatenate([a[~bad], na])
        b = np.concatenate([b[~bad], nb])
        val = np.concatenate([val[~bad], nv])
        err = np.concatenate([err[~bad], ne])


def evolve_exact(state: GravEigenstate, z, t, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                 return_info=False):
    """Exact released state at ``(z, t)``; broadcasts over array inputs.

    With ``return_info=True`` also returns a dict holding the worst relative
    error estimate and the largest panel count used.
    """
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    zb, tb = np.broadcast_arrays(z, t)
    lo, hi = state.a_n, _upper_limit(cfg)
    # absolute floor for the tails, kept above round-off
    floor = max(1e-6 * cfg.rel_tol, 1e-14) * _amplitude_l1(state.a_n, state.ai_prime_an, hi)
    alpha = phase_group(state, tb).ravel()
    c = np.asarray(chi0(state, zb, tb).chi0, dtype=float).ravel()
    out = np.empty(alpha.shape, dtype=complex)
    worst_err, worst_panels = 0.0, 0
    for i in range(out.size):
        val, err, npan = _oscillatory_integral(lo, hi, c[i], alpha[i], cfg, floor)
        out[i] = val
        worst_panels = max(worst_panels, npan)
        if val != 0:
            worst_err = max(worst_err, err / abs(val))
    psi = np.sqrt(alpha / (pi * state.l_g)) * out / state.ai_prime_an
    psi = psi.reshape(zb.shape)
    amp = _pack(psi[()] if psi.ndim == 0 else psi)
    if return_info:
        return amp, {"rel_error": worst_err, "max_panels": worst_panels}
    return amp


def evolve_sd(state: GravEigenstate, z, t):
    """Steepest-descent (stationary-phase) approximation of the released state."""
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    c = np.asarray(chi0(state, z, t).chi0, dtype=float)
    fall = z + 0.5 * state.g * t * t
    x = np.sqrt(state.mass / (pi * state.hbar * t)) * fall
    cf, sf = fresnel(x)
    ai = airy(np.minimum(c, 1e3)).ai
    psi = ai / (state.ai_prime_an * np.sqrt(2.0 * state.l_g)) * ((0.5 + cf) + 1j * (0.5 + sf))
    return _pack(psi)


def comoving_window(state: GravEigenstate, t, spread_widths=16.0, turning_heights=20.0):
    """Half-width (m) of a window, centred on the falling mirror position,
    that holds all but ~1e-4 of the released probability."""
    return turning_heights * state.h_n + spread_widths * spreading_length(state, t)


def norm_profile(state: GravEigenstate, t, cfg: QuadratureConfig = DEFAULT_QUADRATURE, points=4096):
    """Total probability at time ``t`` by trapezoid on a comoving window.

    Returns ``(norm, z_grid, density)``.
    """
    w = comoving_window(state, t)
    zc = -0.5 * state.g * t * t
    z = np.linspace(zc - w, zc + w, points)
    rho = evolve_exact(state, z, t, cfg).density
    return float(np.trapezoid(rho, z)), z, rho


def detector_profile(state: GravEigenstate, z, times, method="exact",
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Density at fixed detector depth ``z`` over ``times``."""
    if method == "exact":
        return evolve_exact(state, z, times, cfg).density
    if method == "sd":
        return evolve_sd(state, z, times).density
    raise ValueError(f"method must be 'exact' or 'sd', got {method!r}")


def arrival_window(state: GravEigenstate, z, spread_widths=16.0, turning_heights=20.0):
    """Detector time interval covering the arriving packet."""
    ts = time_scales(state, z)
    t0 = ts.t_class
    w = comoving_window(state, t0, spread_widths, turning_heights)
    g = state.g
    lo = sqrt(max(2.0 * (abs(z) - w) / g, 0.0)) if abs(z) > w else 0.5 * t0
    hi = sqrt(2.0 * (abs(z) + w) / g)
    return lo, hi


def peak_arrival_time(state: GravEigenstate, z, cfg: QuadratureConfig = QuadratureConfig(rel_tol=1e-8),
                      method="exact", scan_points=801):
    """Time of maximum density at the detector.

    A coarse scan over :func:`arrival_window` is refined with a bounded
    Brent search on the neighbouring grid cells.
    """
    lo, hi = arrival_window(state, z)
    if method == "sd":
        # The SD density lives on the l_g scale; scan that region instead.
        ts = time_scales(state, z)
        span = (ts.tau - ts.t_class)
        lo, hi = ts.t_class - 2 * span, ts.tau + 2 * span
    grid = np.linspace(lo, hi, scan_points)
    rho = detector_profile(state, z, grid, method, cfg)
    i = int(np.argmax(rho))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda t: -float(detector_profile(state, z, t, method, cfg)),
                          bounds=(a, b), method="bounded",
                          options={"xatol": 1e-14 * b, "maxiter": 500})
    return float(res.x)


def _gl_integrate(func, edges, nodes=8):
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    pts = (mid[:, None] + half[:, None] * x).ravel()
    vals = np.asarray(func(pts)).reshape(-1, nodes)
    return float(np.sum(vals @ w * half))


def _panel_edges(a, b, width):
    n = max(1, int(np.ceil((b - a) / width)))
    return np.linspace(a, b, n + 1)


def structure_scale(state: GravEigenstate, t):
    """Shortest length on which the exact density varies at time ``t``.

    Far field: the Fourier scale ``L / 14`` of a packet ~14 ``l_g`` wide.
    Near field: ``l_g`` or the Fresnel fringe spacing ``l_g / sqrt(2 alpha)``.
    """
    alpha = float(phase_group(state, t))
    return max(spreading_length(state, t) / 14.0, state.l_g * min(1.0, 1.0 / sqrt(2.0 * alpha)))


def exact_density_spline(state: GravEigenstate, t, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                         half_width=None, oversample=10.0):
    """Cubic spline of the exact density in the comoving coordinate
    ``x = z + g t^2 / 2`` over ``[-half_width, half_width]``."""
    w = comoving_window(state, t) if half_width is None else half_width
    step = structure_scale(state, t) / oversample
    x = np.linspace(-w, w, int(np.ceil(2 * w / step)) + 1)
    rho = evolve_exact(state, x - 0.5 * state.g * t * t, t, cfg).density
    return CubicSpline(x, rho), x, rho


def _fine_grid(state, a, b, step):
    return np.linspace(a, b, int(np.ceil((b - a) / step)) + 1)


def _l2_against(state, t, reference, cfg, ref_reach):
    """Return ``(||rho_exact - ref||^2, ||rho_exact||^2, ||ref||^2)``.

    ``reference(x)`` is cheap and varies on the ``l_g`` scale inside
    ``[-ref_reach, support]``; outside it is treated as 0.
    """
    # 6 turning heights is ample below the far field; beyond it 16 L dominates.
    spline, xc, rc = exact_density_spline(state, t, cfg, half_width=comoving_window(state, t, turning_heights=6.0))
    support = (_upper_limit(cfg) - state.a_n) * state.l_g
    w = xc[-1]
    lo = -min(ref_reach, w)
    hi = min(support, w)
    xf = _fine_grid(state, lo, hi, 0.01 * state.l_g)
    ref = reference(xf)
    ex_f = spline(xf)
    inside = np.trapezoid((ex_f - ref) ** 2, xf)
    ex2_in = np.trapezoid(ex_f ** 2, xf)
    # exact density alone outside the fine window, from the coarse samples
    outside = np.where((xc < lo) | (xc > hi), rc, 0.0)
    ex2_out = np.trapezoid(outside ** 2, xc)
    return inside + ex2_out, ex2_in + ex2_out, np.trapezoid(ref ** 2, xf)


def classical_limit_check(state: GravEigenstate, t, window=None,
                          cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Probability within ``|z + g t^2/2| <= window`` at time ``t``.

    ``window`` defaults to ``3 l_g |a_n|`` (three turning heights).  The
    released state stays normalised, so no division by the total is needed.
    At ``t = 0`` the initial eigenstate is integrated directly.
    """
    t = float(t)
    if t < 0:
        raise DomainError("t must be >= 0")
    w = 3.0 * state.l_g * abs(state.a_n) if window is None else float(window)
    if t == 0:
        return _gl_integrate(lambda z: eigenfunction(state, z) ** 2, _panel_edges(0.0, w, 0.5 * state.l_g))
    zc = -0.5 * state.g * t * t
    edges = np.concatenate([_panel_edges(-w, 0.0, structure_scale(state, t)),
                            _panel_edges(0.0, w, structure_scale(state, t))[1:]])
    return _gl_integrate(lambda x: evolve_exact(state, zc + x, t, cfg).density, edges)


def strong_ep_deviation(state: GravEigenstate, t, cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Normalised L2 distance between the released density and the
    undistorted, co-falling initial density ``|psi_n(z + g t^2/2)|^2``.
    """
    t = float(_check_time(t))
    diff2, _, ref2 = _l2_against(state, t, lambda x: eigenfunction(state, x) ** 2, cfg,
                                 ref_reach=2.0 * state.l_g)
    return sqrt(diff2 / ref2)


def sd_discrepancy(state: GravEigenstate, t, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                   sd_reach=2000.0):
    """Relative L2 difference ``||rho_sd - rho_exact|| / ||rho_exact||`` over
    the comoving coordinate at time ``t``.

    The steepest-descent density has an oscillating tail below the falling
    mirror; it is resolved out to ``sd_reach`` gravitational lengths, beyond
    which its square integral is below ~1e-8 of the main lobe.
    """
    t = float(_check_time(t))
    zc = -0.5 * state.g * t * t
    diff2, ex2, _ = _l2_against(state, t, lambda x: evolve_sd(state, zc + x, t).density, cfg,
                                ref_reach=sd_reach * state.l_g)
    return sqrt(diff2 / ex2)


def relative_l2(a, b, x):
    """``||a - b|| / ||b||`` on grid ``x`` (trapezoid)."""
    return sqrt(np.trapezoid((a - b) ** 2, x) / np.trapezoid(b ** 2, x))
