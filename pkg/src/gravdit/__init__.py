"""Diffraction in time and free fall of quantum states in uniform gravity.

Modules
-------
specfun      Airy functions, Airy zeros, Fresnel integrals
constants    physical constants and the particle catalog
scenario_a   shutter-released beam falling onto a detector
scenario_b   bound states above a mirror and their free-fall delay
propagate    exact and steepest-descent evolution after release
estimators   scikit-learn style wrappers
cli          command line entry point
"""
from .constants import DEFAULT_CONSTANTS, ParticleSpec, PhysicalConstants, catalog, get_particle
from .exceptions import DomainError, NumericalError, PreconditionError, QuadratureError
from .specfun import airy, airy_zero, airy_zeros, fresnel

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONSTANTS", "ParticleSpec", "PhysicalConstants", "catalog", "get_particle",
    "DomainError", "NumericalError", "PreconditionError", "QuadratureError",
    "airy", "airy_zero", "airy_zeros", "fresnel",
]
