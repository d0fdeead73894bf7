"""Cumulant-matching loss and its derivatives with respect to an unmixing direction."""

import numpy as np
from scipy.special import softmax

from src.core.exceptions import DimensionMismatch, EmptyWindow
from src.sica.models import ZGrid
from src.sica.reference import reference_cgf_values
from src.signals.cumulants import empirical_cgf
from src.signals.models import Window


def cgf_deviation(signal, window, z_grid):
    """``K[s, z_i] - K_ref(z_i)`` for every point of the grid."""
    z_values = z_grid.as_array()
    estimate = empirical_cgf(signal, window, z_values)
    return estimate.k_values - reference_cgf_values(z_values)


def sica_loss(signal, window=None, z_grid=None):
    """Sum of squared deviations of the empirical cumulants from the cosine reference."""
    z_grid = z_grid or ZGrid()
    deviation = cgf_deviation(signal, window, z_grid)
    return float(deviation @ deviation)


def loss_gradient_hessian(whitened, direction, window=None, z_grid=None):
    """Exact gradient and Hessian of ``sica_loss(direction @ channels)``.

    With ``p_z`` the softmax weights of ``z s`` over the window,
    ``dK/dw = z E_p[x]`` and ``d2K/dw2 = z^2 Cov_p[x]``.
    """
    z_grid = z_grid or ZGrid()
    window = window or whitened.window
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != (whitened.n_channels,):
        raise DimensionMismatch(
            f"direction has shape {direction.shape}, expected ({whitened.n_channels},)"
        )
    samples = whitened.channels[:, window.slice]
    if samples.shape[1] == 0:
        raise EmptyWindow(f"window [{window.start}, {window.stop}) holds no samples")

    z_values = z_grid.as_array()
    signal = direction @ samples
    deviation = cgf_deviation(signal, Window.full(signal.size), z_grid)

    weights = softmax(z_values[:, np.newaxis] * signal[np.newaxis, :], axis=1)
    weighted_means = weights @ samples.T  # (L, M)

    gradient = 2.0 * (deviation * z_values) @ weighted_means
    hessian = np.zeros((whitened.n_channels, whitened.n_channels))
    for z, residual, p, mean in zip(z_values, deviation, weights, weighted_means):
        centred = samples - mean[:, np.newaxis]
        covariance = (centred * p) @ centred.T
        hessian += 2.0 * z * z * (np.outer(mean, mean) + residual * covariance)
    return gradient, (hessian + hessian.T) / 2
