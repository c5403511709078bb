"""scikit-learn style wrappers.

Both models are "fitted" by resolving the physics (time of flight, bound
state) from their constructor parameters; ``predict`` then maps detector
times to densities.  Parameters follow the usual sklearn rules: stored
verbatim in ``__init__`` and validated in ``fit``.
"""
import numpy as np
from sklearn.base import BaseEstimator

from . import propagate, scenario_a, scenario_b
from .constants import DEFAULT_CONSTANTS, ParticleSpec, PhysicalConstants
from .exceptions import PreconditionError
from .validation import check_depth, check_level, check_positive, check_times

__all__ = ["ShutterDensityModel", "ReleasedStateModel"]


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise AttributeError(f"{type(est).__name__} is not fitted yet; call fit() first")


class ShutterDensityModel(BaseEstimator):
    """Detector density for a beam released by a shutter under gravity.

    Parameters
    ----------
    mass, speed : float
        Particle mass (kg) and initial downward speed (m/s).
    z : float
        Detector depth, negative.
    g, hbar : float
    """

    def __init__(self, mass=1.675e-27, speed=0.02, z=-1.0,
                 g=DEFAULT_CONSTANTS.g, hbar=DEFAULT_CONSTANTS.hbar):
        self.mass = mass
        self.speed = speed
        self.z = z
        self.g = g
        self.hbar = hbar

    def fit(self, X=None, y=None):
        """Resolve the beam; ``X`` and ``y`` are ignored."""
        z = check_depth(self.z)
        self.beam_ = scenario_a.ShutterBeam(
            check_positive(self.mass, "mass"), check_positive(self.speed, "speed"),
            check_positive(self.g, "g"), check_positive(self.hbar, "hbar"))
        self.tof_ = scenario_a.classical_tof(self.beam_, z)
        try:
            self.width_ = scenario_a.diffraction_width(self.beam_, z).delta_t
        except PreconditionError:
            self.width_ = None
        return self

    def transform(self, t):
        """Fresnel argument at times ``t``."""
        _check_fitted(self, "beam_")
        return scenario_a.xi(self.beam_, self.z, check_times(t))

    def predict(self, t):
        """Quantum density at times ``t`` (unit incident density)."""
        _check_fitted(self, "beam_")
        return scenario_a.density_a(self.beam_, self.z, check_times(t))

    def predict_classical(self, t):
        _check_fitted(self, "beam_")
        return scenario_a.classical_density_a(self.beam_, self.z, check_times(t))


class ReleasedStateModel(BaseEstimator):
    """Detector density after a bound state above a mirror is released.

    ``method`` is ``"exact"`` (adaptive oscillatory quadrature) or ``"sd"``
    (steepest-descent approximation).
    """

    def __init__(self, n=1, mass=1.675e-27, z=-1.0, method="exact",
                 g=DEFAULT_CONSTANTS.g, hbar=DEFAULT_CONSTANTS.hbar,
                 rel_tol=1e-6, chi_max=16.0):
        self.n = n
        self.mass = mass
        self.z = z
        self.method = method
        self.g = g
        self.hbar = hbar
        self.rel_tol = rel_tol
        self.chi_max = chi_max

    def fit(self, X=None, y=None):
        if self.method not in ("exact", "sd"):
            raise ValueError(f"method must be 'exact' or 'sd', got {self.method!r}")
        check_depth(self.z)
        consts = PhysicalConstants(hbar=check_positive(self.hbar, "hbar"), g=check_positive(self.g, "g"))
        particle = ParticleSpec("custom", check_positive(self.mass, "mass"))
        self.state_ = scenario_b.grav_state(check_level(self.n), particle, consts)
        self.timescales_ = scenario_b.time_scales(self.state_, self.z)
        self.delay_ = scenario_b.time_delay(self.state_, self.z)
        self.quadrature_ = propagate.QuadratureConfig(chi_max=self.chi_max, rel_tol=self.rel_tol)
        return self

    def predict(self, t):
        _check_fitted(self, "state_")
        return np.asarray(propagate.detector_profile(
            self.state_, self.z, check_times(t), self.method, self.quadrature_))

    def peak_time(self):
        _check_fitted(self, "state_")
        return propagate.peak_arrival_time(self.state_, self.z, method=self.method)
