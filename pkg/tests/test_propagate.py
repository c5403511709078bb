import numpy as np
import pytest
from scipy.special import airy as sp_airy

from gravdit.exceptions import DomainError, QuadratureError
from gravdit.propagate import (QuadratureConfig, chi0, chi_decay, classical_limit_check, evolve_exact,
                               evolve_sd, norm_profile, peak_arrival_time, phase_group, sd_discrepancy,
                               spreading_length, strong_ep_deviation)
from gravdit.scenario_a import density_from_xi
from gravdit.scenario_b import eigenfunction, grav_state, time_scales
from gravdit.specfun import airy


def t_for_alpha(state, alpha):
    t_g = (2 * state.hbar / (state.mass * state.g ** 2)) ** (1 / 3)
    return t_g / (4 * alpha)


def brute_force(state, z, t, nodes=1_000_000):
    """Plain trapezoid of the defining integral on a uniform chi grid."""
    chi = np.linspace(state.a_n, chi_decay(), nodes)
    alpha = phase_group(state, t)
    c = chi0(state, z, t).chi0
    f = sp_airy(chi)[0] * np.exp(1j * alpha * (chi - c) ** 2)
    integral = np.trapezoid(f, chi)
    return np.sqrt(alpha / (np.pi * state.l_g)) * integral / state.ai_prime_an


class TestChi0:
    def test_examples(self, neutron_state):
        s = neutron_state
        assert chi0(s, s.h_n, 0.0).chi0 == 0.0
        assert chi0(s, 0.0, 0.0).chi0 == pytest.approx(s.a_n, rel=1e-15)
        t = 0.3
        assert chi0(s, s.h_n - 0.5 * s.g * t * t, t).chi0 == pytest.approx(0.0, abs=1e-6)


class TestEvolveExact:
    @pytest.mark.parametrize("alpha,offset", [(0.5, 0.3), (2.0, -1.5), (0.05, 20.0)])
    def test_brute_force_oracle(self, neutron_state, alpha, offset):
        s = neutron_state
        t = t_for_alpha(s, alpha)
        z = -0.5 * s.g * t * t + offset * s.l_g
        ref = brute_force(s, z, t)
        got = evolve_exact(s, z, t, QuadratureConfig(rel_tol=1e-10)).value
        assert abs(got - ref) / abs(ref) < 1e-4

    def test_tolerance_refinement(self, neutron_state):
        s = neutron_state
        t = time_scales(s, -0.1).t_mean
        z = np.linspace(-0.1 - 2e-3, -0.1 + 2e-3, 7)
        a = evolve_exact(s, z, t, QuadratureConfig(rel_tol=1e-6)).density
        b = evolve_exact(s, z, t, QuadratureConfig(rel_tol=5e-7)).density
        assert np.max(np.abs(a - b) / b) < 1e-6

    def test_return_info(self, neutron_state):
        amp, info = evolve_exact(neutron_state, -0.1, 0.1428, return_info=True)
        assert info["rel_error"] <= 1e-6 and info["max_panels"] > 0
        assert amp.density == pytest.approx(amp.re ** 2 + amp.im ** 2)

    @pytest.mark.parametrize("t", [0.0, -1.0, np.nan])
    def test_bad_time(self, neutron_state, t):
        with pytest.raises(DomainError):
            evolve_exact(neutron_state, -0.1, t)

    def test_panel_budget(self, neutron_state):
        t = t_for_alpha(neutron_state, 1e4)
        with pytest.raises(QuadratureError) as err:
            evolve_exact(neutron_state, -0.5 * 9.81 * t * t, t, QuadratureConfig(max_panels=100))
        assert err.value.diagnostics["alpha"] == pytest.approx(1e4)

    @pytest.mark.parametrize("kwargs", [dict(chi_max=5), dict(phase_per_panel=4.0), dict(rel_tol=0.1),
                                        dict(max_panels=10)])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureConfig(**kwargs)

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("frac", [0.1, 1.0, 1.5])
    def test_norm(self, ucn, n, frac):
        s = grav_state(n, ucn)
        norm, _, rho = norm_profile(s, frac * time_scales(s, -0.1).tau)
        assert norm == pytest.approx(1.0, abs=1e-3)
        assert np.all(rho >= 0)


class TestSteepestDescent:
    def test_factorised_form(self, neutron_state):
        s = neutron_state
        t = 0.2
        x = np.linspace(0.1, 0.9, 9) * s.h_n
        z = x - 0.5 * s.g * t * t
        xi = np.sqrt(s.mass / (np.pi * s.hbar * t)) * x
        np.testing.assert_allclose(evolve_sd(s, z, t).density,
                                   eigenfunction(s, x) ** 2 * density_from_xi(xi), rtol=1e-9)

    def test_large_xi_limit(self, neutron_state):
        # near field: xi >> 1 across the support, brace -> 1 + i
        s = neutron_state
        t = t_for_alpha(s, 1e4)
        x = np.linspace(0.3, 0.9, 7) * s.h_n
        z = x - 0.5 * s.g * t * t
        assert np.sqrt(s.mass / (np.pi * s.hbar * t)) * x[0] > 50
        np.testing.assert_allclose(evolve_sd(s, z, t).density, eigenfunction(s, x) ** 2, rtol=0.02)

    def test_nodes_between_class_and_turning_times(self, ucn):
        s = grav_state(2, ucn)
        ts = time_scales(s, -0.1)
        t = np.linspace(ts.t_class, ts.tau, 4001)[1:-1]
        c = chi0(s, -0.1, t).chi0
        ai = airy(c).ai
        assert np.count_nonzero(np.diff(np.sign(ai))) == 1
        rho = evolve_sd(s, -0.1, t).density
        assert np.all(rho >= 0)
        k = np.argmin(rho)
        assert rho[k] < 1e-6 * rho.max()
        # strictly positive away from the node
        assert np.all(rho[np.abs(np.arange(len(t)) - k) > 2] > 0)

    def test_converges_as_alpha_grows(self, neutron_state):
        d = [sd_discrepancy(neutron_state, t_for_alpha(neutron_state, a)) for a in (0.3, 1.0, 3.0)]
        assert d[0] > d[1] > d[2]

    def test_peak_near_t_mean(self, ucn):
        s = grav_state(1, ucn.scaled(1e3))
        ts = time_scales(s, -1.0)
        assert abs(peak_arrival_time(s, -1.0, method="sd") - ts.t_mean) < 0.01 * ts.t_mean


class TestDiagnostics:
    def test_strong_ep_positive_at_detector(self, neutron_state):
        t = time_scales(neutron_state, -0.1).t_mean
        assert strong_ep_deviation(neutron_state, t) > 0.05

    def test_strong_ep_vanishes_for_short_times(self, neutron_state):
        d = [strong_ep_deviation(neutron_state, t_for_alpha(neutron_state, a)) for a in (0.3, 1.0, 3.0)]
        assert d[0] > d[1] > d[2] > 0
        assert d[2] < 0.1

    def test_universal_in_scaled_time(self, ucn):
        # alpha fixes the dimensionless problem, so the measure is mass independent.
        a, b = grav_state(1, ucn), grav_state(1, ucn.scaled(1e3))
        da = strong_ep_deviation(a, t_for_alpha(a, 0.5))
        db = strong_ep_deviation(b, t_for_alpha(b, 0.5))
        assert db == pytest.approx(da, rel=1e-4)

    def test_classical_limit_at_release(self, neutron_state):
        assert classical_limit_check(neutron_state, 0.0) == pytest.approx(1.0, abs=1e-7)

    def test_classical_limit_fixed_window_increases_with_mass(self, ucn):
        s1 = grav_state(1, ucn)
        t = time_scales(s1, -0.1).t_mean
        w = 200 * s1.h_n
        f = [classical_limit_check(grav_state(1, ucn.scaled(k)), t, window=w) for k in (1, 10, 100, 1000)]
        assert all(np.diff(f) > 0) and f[-1] > 0.9999

    def test_classical_limit_default_window_shrinks_faster_than_packet(self, ucn):
        # The default window scales like l_g ~ m^(-2/3), the spreading like m^(-1/3).
        t = time_scales(grav_state(1, ucn), -0.1).t_mean
        f = [classical_limit_check(grav_state(1, ucn.scaled(k)), t) for k in (1, 100)]
        assert f[1] < f[0]

    def test_spreading_length(self, neutron_state):
        s = neutron_state
        t = 0.1
        assert spreading_length(s, t) == pytest.approx(s.l_g / (2 * phase_group(s, t)))
