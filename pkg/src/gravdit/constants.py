"""Physical constants, the particle catalog and JSON overrides.

Everything is SI.  ``g`` and ``hbar`` are not fixed by the underlying
physics setup, so both are plain dataclass fields that a config file or the
command line can replace.
"""
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

__all__ = [
    "PhysicalConstants", "ParticleSpec", "DEFAULT_CONSTANTS",
    "catalog", "get_particle", "load_config", "constants_from_config",
    "catalog_from_config", "UnknownParticleError",
]

HBAR = 1.054571817e-34
G_EARTH = 9.81
NEUTRON_MASS = 1.675e-27


class UnknownParticleError(KeyError):
    pass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    g: float = G_EARTH

    def __post_init__(self):
        if not (self.hbar > 0 and self.g > 0):
            raise ValueError(f"hbar and g must be positive, got hbar={self.hbar}, g={self.g}")


@dataclass(frozen=True)
class ParticleSpec:
    name: str
    mass: float
    default_speed: Optional[float] = None

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"{self.name}: mass must be positive, got {self.mass}")
        if self.default_speed is not None and not self.default_speed >= 0:
            raise ValueError(f"{self.name}: default_speed must be >= 0")

    def scaled(self, factor):
        """Copy with the mass multiplied by ``factor`` (used for mass sweeps)."""
        return replace(self, name=f"{self.name}*{factor:g}", mass=self.mass * factor)


DEFAULT_CONSTANTS = PhysicalConstants()

_CATALOG = (
    ParticleSpec("thermal_neutron", NEUTRON_MASS, 2200.0),
    ParticleSpec("ucn", NEUTRON_MASS, 0.02),
    ParticleSpec("cesium", 2.2e-25, 0.02),
    ParticleSpec("c60", 1.19668e-24, 0.02),
    ParticleSpec("c176", 3.50706e-24, 0.02),
)


def catalog():
    """The five built-in particles, in a fixed order."""
    return list(_CATALOG)


def get_particle(name, particles=None):
    for p in particles if particles is not None else _CATALOG:
        if p.name == name:
            return p
    known = ", ".join(p.name for p in (particles or _CATALOG))
    raise UnknownParticleError(f"unknown particle {name!r}; known: {known}")


def load_config(path):
    """Read a flat JSON config file into a dict.

    Keys mirror the CLI flags with dashes replaced by underscores
    (``t_start``, ``rel_tol`` ...).  A ``particles`` mapping may override
    catalog entries, e.g. ``{"particles": {"c60": {"default_speed": 0.1}}}``.
    """
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def constants_from_config(cfg):
    kwargs = {k: float(cfg[k]) for k in ("hbar", "g") if cfg.get(k) is not None}
    return PhysicalConstants(**kwargs)


def catalog_from_config(cfg):
    overrides = cfg.get("particles") or {}
    out = []
    for p in _CATALOG:
        o = overrides.get(p.name)
        out.append(replace(p, **o) if o else p)
    for name, o in overrides.items():
        if name not in {p.name for p in _CATALOG}:
            out.append(ParticleSpec(name=name, **o))
    return out
