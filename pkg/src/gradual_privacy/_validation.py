"""Input validation helpers used by the public entry points."""

from __future__ import annotations

import math
import numbers

import numpy as np

from .exceptions import LevelOrderError


def check_level(eps, name="eps"):
    """Return ``eps`` as a float after checking it is a valid privacy level."""
    if isinstance(eps, bool) or not isinstance(eps, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(eps).__name__}")
    eps = float(eps)
    if not math.isfinite(eps) or eps <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {eps!r}")
    return eps


def check_level_pair(eps1, eps2):
    """Validate an ordered pair ``eps1 <= eps2`` of privacy levels."""
    eps1 = check_level(eps1, "eps1")
    eps2 = check_level(eps2, "eps2")
    if eps2 < eps1:
        raise LevelOrderError(f"expected eps1 <= eps2, got eps1={eps1!r} > eps2={eps2!r}")
    return eps1, eps2


def check_positive(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_finite(x, name="x"):
    """Convert ``x`` to a float64 array and reject NaN or infinite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def check_seed(seed, name="seed"):
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"{name} must be non-negative, got {seed}")
    return seed
