"""Cumulant-generating function of a unit-variance pure cosine.

A cosine ``sqrt(2) cos(wt)`` sampled over whole periods follows the arcsine
law on (-sqrt(2), sqrt(2)); its moment-generating function is ``I0(sqrt(2) z)``
whatever the frequency, so the reference depends on ``z`` alone.
"""

import math

import numpy as np
from scipy.special import i0e

from src.core.exceptions import InvalidParameter

# Past this argument the exponentially scaled Bessel function replaces the
# series, whose terms overflow for large x.
SERIES_LIMIT = 30.0


def log_bessel_i0(x):
    """``log I0(x)`` from the power series ``sum (x/2)^(2k) / (k!)^2``."""
    x = abs(float(x))
    if x > SERIES_LIMIT:
        return math.log(i0e(x)) + x
    quarter_square = x * x / 4.0
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-17 * total:
        k += 1
        term *= quarter_square / (k * k)
        total += term
    return math.log(total)


def reference_cgf(z):
    """``log I0(sqrt(2) z)``; even in ``z``."""
    if not math.isfinite(z):
        raise InvalidParameter(f"z must be finite, got {z}")
    return log_bessel_i0(math.sqrt(2.0) * z)


def reference_cgf_values(z_values):
    return np.array([reference_cgf(float(z)) for z in np.ravel(z_values)])


def arcsine_density(u):
    """Value density of ``sqrt(2) cos(wt)`` over whole periods."""
    u = np.asarray(u, dtype=np.float64)
    inside = np.abs(u) < math.sqrt(2.0)
    density = np.zeros_like(u)
    density[inside] = 1.0 / (math.pi * np.sqrt(2.0 - u[inside] ** 2))
    return density
