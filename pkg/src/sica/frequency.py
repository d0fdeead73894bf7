"""Frequency and phase of a dominantly single-frequency signal.

A zero-padded spectrum gives the coarse frequency, a linear fit at that
frequency gives amplitude and phase, and a nonlinear least-squares fit of
``a cos(wt + phi) + c`` refines all four parameters.
"""

import logging
import math

import numpy as np
from scipy.optimize import least_squares

from src.core.exceptions import NoOscillation, SignalTooShort

logger = logging.getLogger(__name__)

ZERO_PADDING = 8
MIN_SAMPLES = 8


def spectral_peak(signal, dt, padding=ZERO_PADDING):
    """Angular frequency of the largest non-DC bin of the zero-padded spectrum."""
    centred = signal - signal.mean()
    n_fft = padding * signal.size
    spectrum = np.abs(np.fft.rfft(centred, n=n_fft))
    peak = int(np.argmax(spectrum))
    if peak == 0:
        raise NoOscillation("spectrum peaks at zero frequency")
    return 2.0 * math.pi * np.fft.rfftfreq(n_fft, d=dt)[peak]


def linear_cosine_fit(times, signal, omega):
    """Least-squares ``A cos(wt) + B sin(wt) + c`` at fixed ``omega``.

    Returns amplitude, phase and offset of the equivalent ``a cos(wt + phi) + c``.
    """
    design = np.column_stack([np.cos(omega * times), np.sin(omega * times), np.ones_like(times)])
    (cos_part, sin_part, offset), *_ = np.linalg.lstsq(design, signal, rcond=None)
    return math.hypot(cos_part, sin_part), math.atan2(-sin_part, cos_part), offset


def canonical_cosine(amplitude, omega, phase):
    """Rewrite ``a cos(wt + phi)`` with ``a >= 0``, ``w > 0`` and ``phi`` in [0, 2pi)."""
    if omega < 0:
        omega, phase = -omega, -phase
    if amplitude < 0:
        amplitude, phase = -amplitude, phase + math.pi
    return amplitude, omega, phase % (2.0 * math.pi)


def estimate_frequency(signal, grid):
    """Return ``(omega, phase)`` of the dominant cosine in ``signal``."""
    signal = np.asarray(signal, dtype=np.float64).reshape(-1)
    if signal.size < MIN_SAMPLES:
        raise SignalTooShort(f"need at least {MIN_SAMPLES} samples, got {signal.size}")
    if signal.size != grid.n_samples:
        raise SignalTooShort(f"signal has {signal.size} samples, grid has {grid.n_samples}")
    variance = float(signal.var())
    if variance <= 1e-24 * max(1.0, float(np.abs(signal).max()) ** 2):
        raise NoOscillation("signal is constant")

    times = grid.times()
    omega_0 = spectral_peak(signal, grid.dt)
    amplitude_0, phase_0, offset_0 = linear_cosine_fit(times, signal, omega_0)

    def residuals(params):
        amplitude, omega, phase, offset = params
        return amplitude * np.cos(omega * times + phase) + offset - signal

    fit = least_squares(
        residuals,
        x0=[amplitude_0, omega_0, phase_0, offset_0],
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=2000,
    )
    if not np.all(np.isfinite(fit.x)):
        raise NoOscillation("cosine fit diverged")
    residual_variance = float(np.mean(fit.fun**2))
    if residual_variance >= variance:
        raise NoOscillation(
            f"cosine fit leaves residual variance {residual_variance:.3e} >= {variance:.3e}"
        )
    amplitude, omega, phase = canonical_cosine(fit.x[0], fit.x[1], fit.x[2])
    if omega <= 0:
        raise NoOscillation("fitted frequency is not positive")
    logger.debug("frequency %.6f (coarse %.6f), phase %.4f", omega, omega_0, phase)
    return float(omega), float(phase)
