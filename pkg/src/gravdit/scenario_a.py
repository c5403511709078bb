"""Gravitational shutter: a plane-wave beam released at ``t = 0`` above a
detector at depth ``z < 0``.

The incident density is normalised to 1, so the classical density at the
detector is a unit step at the time of flight.  Only densities are
computed; the overall phase of the propagated state never enters.
"""
from dataclasses import dataclass
from math import pi, sqrt
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .constants import DEFAULT_CONSTANTS, ParticleSpec, PhysicalConstants
from .exceptions import DomainError, NumericalError, PreconditionError
from .specfun import fresnel

__all__ = [
    "ShutterBeam", "DiffractionWidth", "DELTA_XI", "WIDTH_GUARD",
    "xi", "xi_rate", "density_a", "density_from_xi", "moshinsky_density",
    "classical_tof", "classical_density_a", "diffraction_width",
    "empirical_crossings", "strong_ep_map_a", "local_average",
]

#: Cornu-spiral estimate of the xi-separation of the first two unit crossings.
DELTA_XI = 0.85
#: Minimum p|z|/hbar for the asymptotic width formula.
WIDTH_GUARD = 1e3


@dataclass(frozen=True)
class ShutterBeam:
    mass: float
    speed: float
    g: float = DEFAULT_CONSTANTS.g
    hbar: float = DEFAULT_CONSTANTS.hbar

    def __post_init__(self):
        for name in ("mass", "speed", "g", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"ShutterBeam.{name} must be > 0, got {getattr(self, name)}")

    @classmethod
    def from_particle(cls, particle: ParticleSpec, consts: PhysicalConstants = DEFAULT_CONSTANTS,
                      speed: Optional[float] = None):
        v = particle.default_speed if speed is None else speed
        if v is None:
            raise DomainError(f"{particle.name} has no default speed; pass speed=")
        return cls(particle.mass, v, consts.g, consts.hbar)

    @property
    def wavenumber(self):
        return self.mass * self.speed / self.hbar


@dataclass(frozen=True)
class DiffractionWidth:
    delta_t: float
    t1: Optional[float] = None
    t2: Optional[float] = None

    @property
    def empirical(self):
        """``t2 - t1`` when the crossings were computed."""
        if self.t1 is None or self.t2 is None:
            return None
        return self.t2 - self.t1


def _check_depth(z):
    z = np.asarray(z, dtype=float)
    if not np.all(z < 0):
        raise DomainError("detector depth z must be < 0")
    return z


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0):
        raise DomainError("t must be > 0")
    return t


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def xi(beam: ShutterBeam, z, t):
    """Fresnel argument ``sqrt(m/(pi hbar t)) (z + v t + g t^2/2)``."""
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    return _out(np.sqrt(beam.mass / (pi * beam.hbar * t)) * (z + beam.speed * t + 0.5 * beam.g * t * t))


def xi_rate(beam: ShutterBeam, z, t):
    """d(xi)/dt; strictly positive for ``z < 0``."""
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    a = np.sqrt(beam.mass / (pi * beam.hbar))
    return _out(a * t ** -1.5 * (0.5 * beam.speed * t + 0.75 * beam.g * t * t - 0.5 * z))


def density_from_xi(x):
    """``|psi|^2 = ((1/2 + C)^2 + (1/2 + S)^2) / 2``."""
    c, s = fresnel(x)
    return _out(0.5 * ((0.5 + np.asarray(c)) ** 2 + (0.5 + np.asarray(s)) ** 2))


def density_a(beam: ShutterBeam, z, t):
    """Quantum density at the detector, unit incident density."""
    return density_from_xi(xi(beam, z, t))


def moshinsky_density(mass, speed, hbar, z, t):
    """Free-space (no gravity) shutter density for a beam of ``speed``."""
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    arg = np.sqrt(mass / (pi * hbar * t)) * (z + speed * t)
    return density_from_xi(arg)


def strong_ep_map_a(beam: ShutterBeam, z, t):
    """Density obtained in the freely falling, beam-comoving frame.

    The detector coordinate is mapped to the frame moving with the classical
    trajectory ``-v t - g t^2/2`` and the static free-space shutter density
    is evaluated there.  Equal to :func:`density_a` identically.
    """
    t = _check_time(t)
    z = np.asarray(z, dtype=float)
    z_frame = z + beam.speed * t + 0.5 * beam.g * t * t
    return moshinsky_density(beam.mass, 0.0, beam.hbar, z_frame, t)


def classical_tof(beam: ShutterBeam, z):
    """Mass-independent classical time of flight to depth ``z``."""
    z = _check_depth(z)
    r = beam.speed / beam.g
    # r**2 + 2|z|/g - r**2 cancels for fast beams; use the conjugate form.
    two_h = 2.0 * np.abs(z) / beam.g
    return _out(two_h / (r + np.sqrt(r * r + two_h)))


def classical_density_a(beam: ShutterBeam, z, t):
    """Unit step at the classical time of flight, right-continuous."""
    tof = classical_tof(beam, z)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    return _out(np.where(t >= tof, 1.0, 0.0))


def diffraction_width(beam: ShutterBeam, z, guard=WIDTH_GUARD, crossings=False):
    """Asymptotic width of the diffraction-in-time pattern.

    ``delta_t = 0.85 sqrt(pi v T / (k (2|z| - v T)^2)) T``.  With
    ``crossings=True`` the first two unit crossings are attached as well.
    """
    z = float(_check_depth(z))
    k = beam.wavenumber
    if not k * abs(z) > guard:
        raise PreconditionError(f"p|z|/hbar = {k * abs(z):.3g} does not exceed the validity guard {guard:g}")
    T = classical_tof(beam, z)
    vT = beam.speed * T
    dt = DELTA_XI * sqrt(pi * vT / (k * (2.0 * abs(z) - vT) ** 2)) * T
    if crossings:
        t1, t2 = empirical_crossings(beam, z)
        return DiffractionWidth(dt, t1, t2)
    return DiffractionWidth(dt)


def empirical_crossings(beam: ShutterBeam, z, max_steps=100_000):
    """First two times after the time of flight where the density equals 1.

    The search marches from ``T`` with steps of 1/20 of the local
    Cornu-oscillation period and polishes each bracketed sign change with
    Brent's method.
    """
    z = float(_check_depth(z))
    T = classical_tof(beam, z)

    def excess(t):
        return density_a(beam, z, t) - 1.0

    roots = []
    t = T
    f = excess(t)
    for _ in range(max_steps):
        x = max(xi(beam, z, t), 1.0)
        # xi-period of the Cornu oscillation near xi is ~2/xi.
        step = 0.05 * (2.0 / x) / xi_rate(beam, z, t)
        t_next = t + step
        f_next = excess(t_next)
        if f * f_next < 0:
            roots.append(brentq(excess, t, t_next, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200))
            if len(roots) == 2:
                return roots[0], roots[1]
        t, f = t_next, f_next
    raise NumericalError("failed to bracket two unit crossings", T=T, found=roots, last_t=t)


def local_average(beam: ShutterBeam, z, t, eps, nodes=16):
    """Time average of :func:`density_a` over ``[t - eps, t + eps]``.

    Composite Gauss-Legendre with panels sized so the Cornu phase
    ``pi xi^2 / 2`` advances by at most pi/2 per panel.
    """
    if not 0 < eps < t:
        raise DomainError("need 0 < eps < t")
    a, b = t - eps, t + eps
    xa, xb = xi(beam, z, a), xi(beam, z, b)
    phase = 0.5 * pi * abs(xb * abs(xb) - xa * abs(xa))
    n_panels = int(min(max(8, np.ceil(phase / (0.5 * pi))), 2_000_000))
    edges = np.linspace(a, b, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    tt = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = density_a(beam, z, tt).reshape(n_panels, nodes)
    return float(np.sum(vals @ w * half) / (b - a))
