"""Real-argument Airy and Fresnel functions.

No external special-function library is used.  The Airy functions are
evaluated from a table of local Taylor expansions on ``[-8, 12]`` (the table
is generated once from the exact values at the origin and from the
asymptotic expansion at ``x = 14``, continued node to node through the Airy
ODE ``y'' = x y``) and from the classical asymptotic expansions outside that
interval.  The Fresnel integrals use the Maclaurin series near the origin,
a Lentz continued fraction for the complementary error function in the
middle range, and the asymptotic auxiliary functions ``f`` and ``g`` for
large arguments.

Switch points were calibrated so that neighbouring branches agree to better
than ``1e-13`` (Airy, relative to the local envelope) and ``1e-14``
(Fresnel, absolute) at the switch; see ``tests/test_specfun.py``.
"""
from functools import lru_cache
from math import gamma, pi, sqrt
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError

__all__ = [
    "AiryPair", "AiryZero", "FresnelPair",
    "airy", "airy_zero", "airy_zeros", "fresnel",
    "AIRY_SWITCH", "AIRY_SWITCH_POS", "AIRY_UNDERFLOW", "AIRY_ZERO_TOL", "AIRY_MAX_ZERO",
    "FRESNEL_SERIES_MAX", "FRESNEL_ASYMPTOTIC_MIN",
]

#: Taylor table covers [-AIRY_SWITCH, AIRY_SWITCH_POS]; asymptotics outside.
AIRY_SWITCH = 8.0
AIRY_SWITCH_POS = 12.0
#: Ai(x) for x above this is reported as 0 with ``underflow=True``.
AIRY_UNDERFLOW = 100.0
#: Required |Ai(a_n)| after polishing a zero.
AIRY_ZERO_TOL = 1e-12
#: Largest supported zero index.
AIRY_MAX_ZERO = 100
#: Fresnel: power series for |x| <= this value.
FRESNEL_SERIES_MAX = 1.5
#: Fresnel: asymptotic auxiliary functions for |x| > this value.
FRESNEL_ASYMPTOTIC_MIN = 5.0

_AI0 = 3.0 ** (-2.0 / 3.0) / gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / gamma(1.0 / 3.0)

_NODE_STEP = 0.125
_TAYLOR_ORDER = 22
_ASYM_START = 14.0


class AiryPair(NamedTuple):
    ai: "float | np.ndarray"
    ai_prime: "float | np.ndarray"
    underflow: "bool | np.ndarray"


class AiryZero(NamedTuple):
    n: int
    a_n: float


class FresnelPair(NamedTuple):
    c: "float | np.ndarray"
    s: "float | np.ndarray"


def _check_finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


# ---------------------------------------------------------------- Airy --

def _asymptotic_coeffs(kmax=60):
    u = np.empty(kmax + 1)
    u[0] = 1.0
    for k in range(1, kmax + 1):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
    k = np.arange(kmax + 1)
    v = -(6 * k + 1) / (6 * k - 1) * u
    return u, v


_U, _V = _asymptotic_coeffs()


def _truncated_series(coef, inv_zeta, alternating=True):
    """Sum sum_k (+-1)^k coef[k] * inv_zeta**k, stopping at the smallest term."""
    inv_zeta = np.asarray(inv_zeta, dtype=float)
    total = np.zeros_like(inv_zeta)
    power = np.ones_like(inv_zeta)
    prev = np.full_like(inv_zeta, np.inf)
    live = np.ones(inv_zeta.shape, dtype=bool)
    for k in range(len(coef)):
        term = coef[k] * power
        if alternating and k % 2:
            term = -term
        mag = np.abs(term)
        live &= mag < prev
        if not live.any():
            break
        total = np.where(live, total + term, total)
        if np.all(mag <= 1e-17 * np.abs(total)):
            break
        prev = mag
        power = power * inv_zeta
    return total


def _airy_asymptotic_pos(x):
    zeta = 2.0 / 3.0 * x ** 1.5
    e = np.exp(-zeta) / (2.0 * sqrt(pi))
    q = x ** 0.25
    ai = e / q * _truncated_series(_U, 1.0 / zeta)
    aip = -e * q * _truncated_series(_V, 1.0 / zeta)
    return ai, aip


def _split_even_odd(coef, inv_zeta):
    # sum_k (-1)^k c_{2k} w^{2k} and sum_k (-1)^k c_{2k+1} w^{2k+1}
    w2 = inv_zeta * inv_zeta
    even = _truncated_series(coef[0::2], w2)
    odd = inv_zeta * _truncated_series(coef[1::2], w2)
    return even, odd


def _airy_asymptotic_neg(x):
    r = -x
    zeta = 2.0 / 3.0 * r ** 1.5
    inv = 1.0 / zeta
    q = r ** 0.25
    theta = zeta - pi / 4.0
    cth, sth = np.cos(theta), np.sin(theta)
    ue, uo = _split_even_odd(_U, inv)
    ve, vo = _split_even_odd(_V, inv)
    ai = (cth * ue + sth * uo) / (sqrt(pi) * q)
    aip = q / sqrt(pi) * (sth * ve - cth * vo)
    return ai, aip


def _taylor_coeffs(x0, y0, yp0, order=_TAYLOR_ORDER):
    c = np.zeros(order + 1)
    c[0], c[1] = y0, yp0
    c[2] = x0 * y0 / 2.0
    for k in range(1, order - 1):
        c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 1) * (k + 2))
    return c


def _taylor_step(x0, y0, yp0, h):
    c = _taylor_coeffs(x0, y0, yp0)
    k = np.arange(len(c))
    powers = h ** k
    y = np.dot(c, powers)
    yp = np.dot(c[1:] * k[1:], powers[:-1])
    return y, yp


@lru_cache(maxsize=None)
def _airy_table():
    """Node positions and Taylor coefficient arrays for Ai on [-8, 12]."""
    nodes = np.arange(-AIRY_SWITCH, AIRY_SWITCH_POS + _NODE_STEP / 2, _NODE_STEP)
    vals = {}
    # Right half: start deep in the recessive region and continue leftwards,
    # the stable direction for the decaying solution.
    x = _ASYM_START
    y, yp = (float(v) for v in _airy_asymptotic_pos(np.array(x)))
    while x > 1e-12:
        h = -_NODE_STEP
        y, yp = _taylor_step(x, y, yp, h)
        x = round(x + h, 12)
        if x <= AIRY_SWITCH_POS:
            vals[x] = (y, yp)
    # Left half: exact values at the origin, continued leftwards.
    vals[0.0] = (_AI0, _AIP0)
    x, y, yp = 0.0, _AI0, _AIP0
    while x > -AIRY_SWITCH + 1e-12:
        y, yp = _taylor_step(x, y, yp, -_NODE_STEP)
        x = round(x - _NODE_STEP, 12)
        vals[x] = (y, yp)
    coeffs = np.array([_taylor_coeffs(x0, *vals[round(float(x0), 12)]) for x0 in nodes])
    dcoeffs = coeffs[:, 1:] * np.arange(1, coeffs.shape[1])
    return nodes, coeffs, dcoeffs


def _horner(coeffs, h):
    acc = coeffs[:, -1].copy()
    for k in range(coeffs.shape[1] - 2, -1, -1):
        acc = acc * h + coeffs[:, k]
    return acc


def _airy_table_eval(x):
    nodes, coeffs, dcoeffs = _airy_table()
    idx = np.rint((x - nodes[0]) / _NODE_STEP).astype(int)
    idx = np.clip(idx, 0, len(nodes) - 1)
    h = x - nodes[idx]
    return _horner(coeffs[idx], h), _horner(dcoeffs[idx], h)


def _airy_values(x):
    """Ai and Ai' for a finite float array, no validation."""
    ai = np.zeros_like(x)
    aip = np.zeros_like(x)
    mid = (x >= -AIRY_SWITCH) & (x <= AIRY_SWITCH_POS)
    if mid.any():
        ai[mid], aip[mid] = _airy_table_eval(x[mid])
    pos = (x > AIRY_SWITCH_POS) & (x <= AIRY_UNDERFLOW)
    if pos.any():
        ai[pos], aip[pos] = _airy_asymptotic_pos(x[pos])
    neg = x < -AIRY_SWITCH
    if neg.any():
        ai[neg], aip[neg] = _airy_asymptotic_neg(x[neg])
    return ai, aip


def airy(x):
    """Airy function Ai and its derivative for real ``x``.

    Accepts scalars or arrays.  For ``x > AIRY_UNDERFLOW`` both values are
    returned as exactly 0 and ``underflow`` is set.
    """
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(_check_finite(x))
    ai, aip = _airy_values(arr)
    under = arr > AIRY_UNDERFLOW
    if scalar:
        return AiryPair(float(ai[0]), float(aip[0]), bool(under[0]))
    return AiryPair(ai.reshape(np.shape(x)), aip.reshape(np.shape(x)),
                    under.reshape(np.shape(x)))


def _airy_scalar(x):
    ai, aip = _airy_values(np.array([x], dtype=float))
    return float(ai[0]), float(aip[0])


@lru_cache(maxsize=None)
def _airy_zero_cached(n):
    t = 3.0 * pi * (4 * n - 1) / 8.0
    seed = -(t ** (2.0 / 3.0))
    half = 0.25 * pi / sqrt(abs(seed))
    lo, hi = seed - half, seed + half
    flo, fhi = _airy_scalar(lo)[0], _airy_scalar(hi)[0]
    widen = 0
    while flo * fhi > 0:
        # The seed is never off by more than a small fraction of the spacing;
        # this only runs as a guard.
        widen += 1
        if widen > 20:
            raise DomainError(f"could not bracket Airy zero {n}")
        lo, hi = lo - half / 4, hi + half / 4
        flo, fhi = _airy_scalar(lo)[0], _airy_scalar(hi)[0]
    x = seed if lo < seed < hi else 0.5 * (lo + hi)
    for _ in range(100):
        f, fp = _airy_scalar(x)
        if f == 0.0:
            break
        if f * flo > 0:
            lo, flo = x, f
        else:
            hi = x
        step = f / fp if fp != 0.0 else np.inf
        nxt = x - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 4e-16 * abs(x):
            x = nxt
            break
        x = nxt
    if abs(_airy_scalar(x)[0]) >= AIRY_ZERO_TOL:
        raise DomainError(f"Airy zero {n} failed to polish: Ai={_airy_scalar(x)[0]:.3e}")
    return x


def airy_zero(n):
    """The ``n``-th (negative) zero of Ai, ``1 <= n <= 100``."""
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= AIRY_MAX_ZERO:
        raise DomainError(f"Airy zero index must be in [1, {AIRY_MAX_ZERO}], got {n}")
    return AiryZero(n, _airy_zero_cached(n))


def airy_zeros(count):
    """First ``count`` zeros of Ai as an array."""
    return np.array([airy_zero(k).a_n for k in range(1, count + 1)])


# ------------------------------------------------------------- Fresnel --

def _sincos_half_pi_x2(x):
    """sin and cos of pi*x**2/2 with the argument reduced exactly mod 4."""
    p = x * x
    # Dekker splitting gives the rounding error of x*x exactly.
    split = 134217729.0 * x
    xh = split - (split - x)
    xl = x - xh
    e = ((xh * xh - p) + 2.0 * xh * xl) + xl * xl
    r = np.fmod(p, 4.0) + e
    arg = 0.5 * pi * r
    return np.sin(arg), np.cos(arg)


def _fresnel_series(x):
    w = 0.5 * pi * x * x
    c = np.zeros_like(x)
    s = np.zeros_like(x)
    term = x.copy()
    for j in range(40):
        if j:
            term = term * w / j
        contrib = term / (2 * j + 1)
        sign = -1.0 if (j // 2) % 2 else 1.0
        if j % 2 == 0:
            c += sign * contrib
        else:
            s += sign * contrib
    return c, s


def _fresnel_cf(x):
    tiny = 1e-300
    pix2 = pi * x * x
    b = 1.0 - 1j * pix2
    cc = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    n = -1
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(2000):
        n += 2
        a = -n * (n + 1.0)
        b = b + 4.0
        d = 1.0 / (a * d + b)
        cc = b + a / cc
        delta = cc * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta.real - 1.0) + np.abs(delta.imag) < 1e-16
        if done.all():
            break
    h = (x - 1j * x) * h
    sn, cs = _sincos_half_pi_x2(x)
    out = (0.5 + 0.5j) * (1.0 - (cs + 1j * sn) * h)
    return out.real, out.imag


def _fresnel_asymptotic(x):
    w = 1.0 / (pi * x * x) ** 2
    kmax = 40
    fk = np.ones(kmax)
    gk = np.ones(kmax)
    for k in range(1, kmax):
        fk[k] = fk[k - 1] * (4 * k - 3) * (4 * k - 1)
        gk[k] = gk[k - 1] * (4 * k - 1) * (4 * k + 1)
    f = _truncated_series(fk, w) / (pi * x)
    g = _truncated_series(gk, w) / (pi * pi * x ** 3)
    sn, cs = _sincos_half_pi_x2(x)
    return 0.5 + f * sn - g * cs, 0.5 - f * cs - g * sn


def _fresnel_values(x):
    ax = np.abs(x)
    c = np.empty_like(ax)
    s = np.empty_like(ax)
    lo = ax <= FRESNEL_SERIES_MAX
    hi = ax > FRESNEL_ASYMPTOTIC_MIN
    mid = ~lo & ~hi
    if lo.any():
        c[lo], s[lo] = _fresnel_series(ax[lo])
    if mid.any():
        c[mid], s[mid] = _fresnel_cf(ax[mid])
    if hi.any():
        c[hi], s[hi] = _fresnel_asymptotic(ax[hi])
    sign = np.where(x < 0, -1.0, 1.0)
    return sign * c, sign * s


def fresnel(x):
    """Fresnel integrals C(x), S(x) with the ``pi u**2 / 2`` convention.

    Infinite arguments are accepted and return the limits ``(+-1/2, +-1/2)``;
    NaN raises :class:`DomainError`.
    """
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.isnan(arr).any():
        raise DomainError("x must not be NaN")
    c = np.empty_like(arr)
    s = np.empty_like(arr)
    inf = np.isinf(arr)
    c[inf] = s[inf] = 0.5 * np.sign(arr[inf])
    fin = ~inf
    if fin.any():
        c[fin], s[fin] = _fresnel_values(arr[fin])
    if scalar:
        return FresnelPair(float(c[0]), float(s[0]))
    return FresnelPair(c.reshape(np.shape(x)), s.reshape(np.shape(x)))
