import logging
import math

import numpy as np
from scipy.optimize import least_squares

from src.baseline.models import DampedFit
from src.core.exceptions import FitDiverged, NoOscillation, SignalTooShort
from src.sica.frequency import canonical_cosine, linear_cosine_fit, spectral_peak

logger = logging.getLogger(__name__)

MIN_SAMPLES = 16


def damped_cosine_fit(signal, grid, gamma=None):
    """Least-squares fit of ``a exp(-gamma t) cos(omega t + phi) + c``.

    The frequency starts at the spectral peak and the damping at zero. Passing
    ``gamma`` holds the damping rate fixed.
    """
    signal = np.asarray(signal, dtype=np.float64).reshape(-1)
    if signal.size < MIN_SAMPLES:
        raise SignalTooShort(f"need at least {MIN_SAMPLES} samples, got {signal.size}")
    if signal.size != grid.n_samples:
        raise SignalTooShort(f"signal has {signal.size} samples, grid has {grid.n_samples}")

    times = grid.times()
    try:
        omega_0 = spectral_peak(signal, grid.dt)
    except NoOscillation as exc:
        raise FitDiverged(str(exc)) from exc
    amplitude_0, phase_0, offset_0 = linear_cosine_fit(times, signal, omega_0)

    if gamma is None:

        def residuals(params):
            amplitude, omega, damping, phase, offset = params
            envelope = amplitude * np.exp(-damping * times)
            return envelope * np.cos(omega * times + phase) + offset - signal

        fit = least_squares(
            residuals,
            x0=[amplitude_0, omega_0, 0.0, phase_0, offset_0],
            bounds=([-np.inf, -np.inf, 0.0, -np.inf, -np.inf], np.inf),
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=5000,
        )
        amplitude, omega, damping, phase, offset = fit.x
    else:
        damping = float(gamma)

        def residuals(params):
            amplitude, omega, phase, offset = params
            envelope = amplitude * np.exp(-damping * times)
            return envelope * np.cos(omega * times + phase) + offset - signal

        fit = least_squares(
            residuals,
            x0=[amplitude_0, omega_0, phase_0, offset_0],
            method="lm",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=5000,
        )
        amplitude, omega, phase, offset = fit.x

    if not fit.success or not np.all(np.isfinite(fit.x)):
        raise FitDiverged(f"damped cosine fit did not converge: {fit.message}")
    amplitude, omega, phase = canonical_cosine(amplitude, omega, phase)
    residual_rms = math.sqrt(float(np.mean(fit.fun**2)))
    logger.debug(
        "damped fit: omega %.6f gamma %.3e residual rms %.3e", omega, damping, residual_rms
    )
    return DampedFit(
        amplitude=float(amplitude),
        omega=float(omega),
        gamma=float(damping),
        phase=float(phase),
        offset=float(offset),
        residual_rms=residual_rms,
    )
