"""Small input checks shared by the estimators and the command line."""
import numbers

import numpy as np

from .exceptions import DomainError

__all__ = ["check_positive", "check_depth", "check_times", "check_level", "check_time_range"]


def check_positive(value, name):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


def check_depth(z):
    """Detector depth: finite and strictly negative."""
    z = float(z)
    if not (np.isfinite(z) and z < 0):
        raise DomainError(f"detector depth z must be < 0, got {z!r}")
    return z


def check_times(t):
    """1-D float array of finite, strictly positive times."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.ndim != 1:
        raise DomainError(f"times must be 1-D, got shape {t.shape}")
    if not np.all(np.isfinite(t) & (t > 0)):
        raise DomainError("times must be finite and > 0")
    return t


def check_level(n):
    """Bound-state index, a positive integer."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def check_time_range(t_start, t_end, points):
    t_start, t_end = check_positive(t_start, "t_start"), check_positive(t_end, "t_end")
    if not t_end > t_start:
        raise DomainError(f"t_end ({t_end}) must exceed t_start ({t_start})")
    if isinstance(points, bool) or not isinstance(points, numbers.Integral) or points < 2:
        raise DomainError(f"points must be an integer >= 2, got {points!r}")
    return t_start, t_end, int(points)
