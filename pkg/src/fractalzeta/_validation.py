"""Small input-validation helpers shared by the public entry points."""
from __future__ import annotations

import numbers

import numpy as np


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_positive_real(value, name, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not np.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be finite and {bound}, got {value}")
    return value


def check_real(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def as_complex_array(s, name="s"):
    """Return ``(array, was_scalar)`` with ``array`` a 1-d complex128 copy."""
    arr = np.asarray(s)
    if arr.dtype.kind not in "biufc":
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr).astype(np.complex128).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr, scalar


def check_grid(values, name, increasing=True, min_points=2):
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < min_points:
        raise ValueError(f"{name} needs at least {min_points} points, got {arr.size}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must contain finite positive values")
    diffs = np.diff(arr)
    if increasing and np.any(diffs <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    if not increasing and np.any(diffs >= 0):
        raise ValueError(f"{name} must be strictly decreasing")
    return arr
