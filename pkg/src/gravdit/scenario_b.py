"""Gravitational bound states above a horizontal mirror and the free-fall
time delay once the mirror is removed.
"""
from dataclasses import dataclass
from math import sqrt
from typing import NamedTuple

import numpy as np

from .constants import DEFAULT_CONSTANTS, ParticleSpec, PhysicalConstants
from .exceptions import DomainError
from .specfun import airy, airy_zero

__all__ = [
    "GravEigenstate", "TimeScales", "DelayRow", "QUOTED_DELAYS", "TABLE_PARTICLES",
    "grav_state", "gravitational_length", "eigenfunction", "mean_position",
    "time_scales", "time_delay", "delay_table",
]


@dataclass(frozen=True)
class GravEigenstate:
    n: int
    mass: float
    g: float
    hbar: float
    l_g: float
    a_n: float
    E_n: float
    h_n: float
    ai_prime_an: float

    @property
    def name(self):
        return f"n={self.n}, m={self.mass:.6g} kg"


class TimeScales(NamedTuple):
    tau: float
    t_mean: float
    t_class: float


def gravitational_length(mass, g, hbar):
    return (hbar * hbar / (2.0 * mass * mass * g)) ** (1.0 / 3.0)


def grav_state(n, particle: ParticleSpec, consts: PhysicalConstants = DEFAULT_CONSTANTS):
    """n-th bound state of ``particle`` above a mirror in gravity ``consts.g``."""
    a_n = airy_zero(n).a_n
    l_g = gravitational_length(particle.mass, consts.g, consts.hbar)
    h_n = -a_n * l_g
    return GravEigenstate(
        n=int(n), mass=particle.mass, g=consts.g, hbar=consts.hbar,
        l_g=l_g, a_n=a_n, E_n=particle.mass * consts.g * h_n, h_n=h_n,
        ai_prime_an=airy(a_n).ai_prime,
    )


def eigenfunction(state: GravEigenstate, z):
    """Normalised eigenfunction ``Ai(a_n + z/l_g) / (sqrt(l_g) Ai'(a_n))``, zero below the mirror."""
    z = np.asarray(z, dtype=float)
    chi = state.a_n + np.where(z > 0, z, 0.0) / state.l_g
    ai = airy(np.minimum(chi, 1e3)).ai
    out = np.where(z > 0, ai / (sqrt(state.l_g) * state.ai_prime_an), 0.0)
    return float(out) if out.ndim == 0 else out


def mean_position(state: GravEigenstate):
    """``<z> = 2 h_n / 3``."""
    return 2.0 * state.h_n / 3.0


def _depth(z):
    z = float(z)
    if not z < 0:
        raise DomainError(f"detector depth z must be < 0, got {z}")
    return abs(z)


def time_scales(state: GravEigenstate, z):
    """Fall times to depth ``z`` from the turning point, the mean position and the mirror."""
    d = _depth(z)
    g = state.g
    return TimeScales(
        tau=sqrt(2.0 * (d + state.h_n) / g),
        t_mean=sqrt(2.0 * (d + 2.0 * state.h_n / 3.0) / g),
        t_class=sqrt(2.0 * d / g),
    )


def time_delay(state: GravEigenstate, z):
    """Relative free-fall delay ``h_n / (3|z|)``."""
    return state.h_n / (3.0 * _depth(z))


#: Table column label -> catalog name.
TABLE_PARTICLES = {"neutron": "ucn", "cesium": "cesium", "c60": "c60", "c176": "c176"}

#: Reference delay values at the default depth of 1 m.
QUOTED_DELAYS = {
    ("neutron", 1): 4.6e-6, ("neutron", 2): 8e-6,
    ("cesium", 1): 4.77e-7, ("cesium", 2): 3.1e-7,
    ("c60", 1): 5.72e-8, ("c60", 2): 1e-7,
    ("c176", 1): 2.06e-8, ("c176", 2): 3.61e-8,
}


class DelayRow(NamedTuple):
    particle: str
    n: int
    computed_delay: float
    quoted_delay: "float | None"
    rel_discrepancy: "float | None"


def delay_table(particles, ns, z=-1.0, consts: PhysicalConstants = DEFAULT_CONSTANTS,
                reference=QUOTED_DELAYS):
    """Rows of computed delays next to the reference values, where known.

    ``particles`` is a list of ``(label, ParticleSpec)`` pairs.  Reference
    values are only attached when ``z == -1`` (the depth they refer to);
    they are never substituted for computed ones.
    """
    rows = []
    for label, particle in particles:
        for n in ns:
            d = time_delay(grav_state(n, particle, consts), z)
            quoted = reference.get((label, n)) if z == -1.0 else None
            rel = None if quoted is None else abs(d - quoted) / quoted
            rows.append(DelayRow(label, int(n), d, quoted, rel))
    return rows
