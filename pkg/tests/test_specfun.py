"""Airy and Fresnel functions against independent references.

mpmath (arbitrary precision) is the primary oracle; Maclaurin series, the
Airy ODE and the Wronskian are used as structural checks.
"""
import math

import mpmath as mp
import numpy as np
import pytest

from gravdit.exceptions import DomainError
from gravdit.specfun import (AIRY_SWITCH, AIRY_SWITCH_POS, AIRY_UNDERFLOW, FRESNEL_ASYMPTOTIC_MIN,
                             FRESNEL_SERIES_MAX, airy, airy_zero, airy_zeros, fresnel)

mp.mp.dps = 30


def mp_airy(x):
    return float(mp.airyai(x)), float(mp.airyai(x, derivative=1))


def envelope(x):
    """Local magnitude scale of Ai: oscillation amplitude for x < 0."""
    if x < 0:
        return abs(x) ** -0.25 / math.sqrt(math.pi)
    return max(abs(mp_airy(x)[0]), 1e-300)


def envelope_p(x):
    if x < 0:
        return abs(x) ** 0.25 / math.sqrt(math.pi)
    return max(abs(mp_airy(x)[1]), 1e-300)


AIRY_POINTS = np.concatenate([np.linspace(-20, 20, 161), [-AIRY_SWITCH, AIRY_SWITCH_POS, -30.5, 45.0, 99.0]])


class TestAiry:
    def test_origin_closed_form(self):
        ai, aip, under = airy(0.0)
        assert ai == pytest.approx(3 ** (-2 / 3) / math.gamma(2 / 3), rel=1e-15)
        assert aip == pytest.approx(-(3 ** (-1 / 3)) / math.gamma(1 / 3), rel=1e-15)
        assert under is False

    @pytest.mark.parametrize("x", AIRY_POINTS)
    def test_against_mpmath(self, x):
        ai, aip, _ = airy(float(x))
        ref, refp = mp_airy(x)
        assert abs(ai - ref) <= 1e-10 * envelope(x)
        assert abs(aip - refp) <= 1e-10 * envelope_p(x)

    def test_maclaurin_small_x(self):
        # Ai = c1 f - c2 g with the two power series solutions of y'' = x y.
        c1, c2 = 3 ** (-2 / 3) / math.gamma(2 / 3), 3 ** (-1 / 3) / math.gamma(1 / 3)
        x = np.linspace(-1, 1, 21)
        f = np.zeros_like(x)
        g = np.zeros_like(x)
        tf, tg = np.ones_like(x), x.copy()
        for k in range(40):
            f += tf
            g += tg
            tf = tf * x ** 3 / ((3 * k + 2) * (3 * k + 3))
            tg = tg * x ** 3 / ((3 * k + 3) * (3 * k + 4))
        np.testing.assert_allclose(airy(x).ai, c1 * f - c2 * g, rtol=0, atol=2e-15)

    def test_wronskian_with_bi(self):
        # Ai Bi' - Ai' Bi = 1/pi; Bi from mpmath.
        for x in (-15.3, -7.9, -2.0, 0.7, 3.3):
            ai, aip, _ = airy(x)
            bi, bip = float(mp.airybi(x)), float(mp.airybi(x, derivative=1))
            assert ai * bip - aip * bi == pytest.approx(1 / math.pi, rel=1e-10)

    def test_ode_residual(self):
        x = np.linspace(-15, 10, 101)
        h = 1e-4
        d2 = (airy(x + h).ai - 2 * airy(x).ai + airy(x - h).ai) / h ** 2
        scale = np.array([envelope(v) for v in x]) * np.maximum(1, np.abs(x))
        assert np.max(np.abs(d2 - x * airy(x).ai) / scale) < 1e-6

    def test_derivative_consistency(self):
        x = np.linspace(-12, 8, 81)
        h = 1e-6
        fd = (airy(x + h).ai - airy(x - h).ai) / (2 * h)
        scale = np.array([envelope_p(v) for v in x])
        assert np.max(np.abs(fd - airy(x).ai_prime) / scale) < 1e-7

    @pytest.mark.parametrize("x0", [-AIRY_SWITCH, AIRY_SWITCH_POS])
    def test_branch_switch_continuity(self, x0):
        below, above = airy(np.nextafter(x0, -np.inf)), airy(np.nextafter(x0, np.inf))
        assert abs(below.ai - above.ai) <= 1e-12 * envelope(x0)
        assert abs(below.ai_prime - above.ai_prime) <= 1e-12 * envelope_p(x0)

    def test_positive_decay_and_monotone(self):
        x = np.linspace(0, 60, 601)
        ai = airy(x).ai
        assert np.all(ai > 0) and np.all(np.diff(ai) < 0)

    def test_underflow_flag(self):
        r = airy(AIRY_UNDERFLOW + 1)
        assert r.ai == 0.0 and r.ai_prime == 0.0 and r.underflow is True
        r = airy(np.array([50.0, 150.0]))
        assert list(r.underflow) == [False, True]
        assert r.ai[0] > 0

    def test_array_shape_preserved(self):
        x = np.linspace(-3, 3, 12).reshape(3, 4)
        r = airy(x)
        assert r.ai.shape == (3, 4) and r.underflow.shape == (3, 4)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(DomainError):
            airy(bad)


class TestAiryZeros:
    def test_first_zeros_against_mpmath(self):
        z = airy_zeros(20)
        ref = np.array([float(mp.airyaizero(k)) for k in range(1, 21)])
        np.testing.assert_allclose(z, ref, rtol=1e-13)

    def test_known_values(self):
        assert airy_zero(1).a_n == pytest.approx(-2.338107410459767, rel=1e-14)
        assert airy_zero(2).a_n == pytest.approx(-4.087949444130970, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 5, 37, 100])
    def test_residual(self, n):
        assert abs(airy(airy_zero(n).a_n).ai) < 1e-12

    def test_ordering_and_interlacing(self):
        z = airy_zeros(30)
        assert np.all(np.diff(z) < 0)
        # zeros of Ai' interlace with zeros of Ai
        for k in range(1, 29):
            mid = np.linspace(z[k], z[k - 1], 200)
            aip = airy(mid).ai_prime
            assert np.count_nonzero(np.diff(np.sign(aip))) == 1

    def test_ratio_of_first_two(self):
        assert airy_zero(2).a_n / airy_zero(1).a_n == pytest.approx(1.748, abs=1e-3)

    @pytest.mark.parametrize("bad", [0, -1, 101, 1.5, True])
    def test_bad_index(self, bad):
        with pytest.raises(DomainError):
            airy_zero(bad)


FRESNEL_POINTS = np.concatenate([np.linspace(-12, 12, 241), [FRESNEL_SERIES_MAX, FRESNEL_ASYMPTOTIC_MIN, 37.3, 1e3, 1e5]])


class TestFresnel:
    @pytest.mark.parametrize("x", FRESNEL_POINTS)
    def test_against_mpmath(self, x):
        c, s = fresnel(float(x))
        assert abs(c - float(mp.fresnelc(x))) < 1e-12
        assert abs(s - float(mp.fresnels(x))) < 1e-12

    def test_odd_symmetry(self):
        x = np.linspace(0, 20, 77)
        c, s = fresnel(x)
        cm, sm = fresnel(-x)
        np.testing.assert_array_equal(cm, -c)
        np.testing.assert_array_equal(sm, -s)

    def test_derivative(self):
        x = np.linspace(-6, 6, 49)
        h = 1e-6
        c1, s1 = fresnel(x + h)
        c0, s0 = fresnel(x - h)
        np.testing.assert_allclose((c1 - c0) / (2 * h), np.cos(np.pi * x ** 2 / 2), atol=1e-8)
        np.testing.assert_allclose((s1 - s0) / (2 * h), np.sin(np.pi * x ** 2 / 2), atol=1e-8)

    @pytest.mark.parametrize("x0", [FRESNEL_SERIES_MAX, FRESNEL_ASYMPTOTIC_MIN])
    def test_branch_switch_continuity(self, x0):
        a, b = fresnel(x0), fresnel(np.nextafter(x0, np.inf))
        assert abs(a.c - b.c) < 1e-14 and abs(a.s - b.s) < 1e-14

    def test_limits(self):
        assert fresnel(np.inf) == (0.5, 0.5)
        assert fresnel(-np.inf) == (-0.5, -0.5)
        c, s = fresnel(1e8)
        assert abs(c - 0.5) < 1e-8 and abs(s - 0.5) < 1e-8

    def test_large_argument_phase_reduction(self):
        # pi x^2 / 2 is huge here; the reduction mod 4 must be exact.
        x = 12345.678
        assert fresnel(x).c == pytest.approx(float(mp.fresnelc(x)), abs=1e-13)
        assert fresnel(x).s == pytest.approx(float(mp.fresnels(x)), abs=1e-13)

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            fresnel(np.nan)
