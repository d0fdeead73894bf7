"""Classic ICA baseline: deflationary fixed-point negentropy maximization.

Negentropy is approximated by ``(E[G(s)] - E[G(nu)])^2`` with ``nu`` standard
normal, for the contrast ``G`` chosen in the config.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import integrate

from src.baseline.models import Contrast, NegentropyConfig
from src.core.exceptions import DimensionMismatch, NoConvergence, NoOscillation, SignalTooShort
from src.sica.frequency import estimate_frequency
from src.sica.loss import sica_loss
from src.sica.models import ComponentResult, ComponentStatus, UnmixingSolution, ZGrid
from src.signals.models import Window
from src.signals.transforms import gram_schmidt, project, whiten

logger = logging.getLogger(__name__)


def _log_cosh(u):
    return np.logaddexp(u, -u) - math.log(2.0)


def _log_cosh_derivatives(u):
    g = np.tanh(u)
    return g, 1.0 - g * g


def _quartic(u):
    return u**4 / 4.0


def _quartic_derivatives(u):
    return u**3, 3.0 * u**2


CONTRASTS = {
    Contrast.LOG_COSH: (_log_cosh, _log_cosh_derivatives),
    Contrast.QUARTIC: (_quartic, _quartic_derivatives),
}


@lru_cache(maxsize=None)
def gaussian_contrast_mean(contrast):
    """``E[G(nu)]`` for standard normal ``nu``, by quadrature."""
    if contrast == Contrast.QUARTIC:
        return 0.75
    function, _ = CONTRASTS[contrast]
    value, _ = integrate.quad(
        lambda u: float(function(u)) * math.exp(-u * u / 2.0) / math.sqrt(2.0 * math.pi),
        -np.inf,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return value


def negentropy(signal, contrast=Contrast.LOG_COSH):
    function, _ = CONTRASTS[contrast]
    return float((np.mean(function(signal)) - gaussian_contrast_mean(contrast)) ** 2)


def _fixed_point(samples, start, previous, config):
    _, derivatives = CONTRASTS[config.contrast]
    direction = gram_schmidt(start, previous)
    for iteration in range(config.max_iterations):
        g, g_prime = derivatives(direction @ samples)
        updated = (samples * g).mean(axis=1) - g_prime.mean() * direction
        updated = gram_schmidt(updated, previous)
        if abs(1.0 - abs(updated @ direction)) < config.tol:
            return updated, iteration + 1
        direction = updated
    raise NoConvergence(f"fixed point not reached in {config.max_iterations} iterations")


def negentropy_extract(raw, n_components, config=None, window=None, z_grid=None):
    """Deflationary negentropy ICA with the same output shape as s-ICA."""
    config = config or NegentropyConfig()
    z_grid = z_grid or ZGrid()
    if n_components < 1 or n_components > raw.n_channels:
        raise DimensionMismatch(
            f"cannot extract {n_components} components from {raw.n_channels} channels"
        )
    window = window or Window.full(raw.n_samples)
    whitened = whiten(raw, window)
    samples = whitened.windowed()

    components = []
    found = []
    for index in range(n_components):
        candidates = []
        for restart in range(config.restarts):
            rng = np.random.default_rng([config.rng_seed, index, restart])
            start = rng.standard_normal(raw.n_channels)
            try:
                direction, iterations = _fixed_point(samples, start, found, config)
            except NoConvergence as exc:
                logger.debug("ica component %d restart %d: %s", index, restart, exc)
                continue
            score = negentropy(direction @ samples, config.contrast)
            logger.debug(
                "ica component %d restart %d: negentropy %.3e after %d iterations",
                index,
                restart,
                score,
                iterations,
            )
            candidates.append((-score, restart, direction))

        if not candidates:
            exc = NoConvergence(f"all {config.restarts} restarts of component {index} failed")
            logger.warning("ica component %d: %s", index, exc)
            components.append(
                ComponentResult(
                    direction=np.zeros(raw.n_channels),
                    signal=np.zeros(raw.n_samples),
                    status=ComponentStatus.NO_CONVERGENCE,
                    message=str(exc),
                )
            )
            continue

        _, _, direction = min(candidates, key=lambda candidate: candidate[:2])
        signal = project(whitened, direction)
        if signal[0] < 0:
            direction, signal = -direction, -signal
        found.append(direction)

        component = ComponentResult(
            direction=direction,
            signal=signal,
            loss=sica_loss(signal, window, z_grid),
            negentropy=negentropy(signal[window.slice], config.contrast),
            window_direction=direction,
            unmixing_row=whitened.dewhiten_row(direction),
        )
        try:
            frequency, phase = estimate_frequency(signal, raw.grid)
        except (NoOscillation, SignalTooShort) as exc:
            component = component.evolve(status=ComponentStatus.NO_OSCILLATION, message=str(exc))
        else:
            component = component.evolve(
                frequency=frequency,
                phase=phase,
                frequency_history=[frequency],
                loss_history=[component.loss],
            )
        logger.info(
            "ica component %d: negentropy %.3e, sica loss %.3e",
            index,
            component.negentropy,
            component.loss,
        )
        components.append(component)

    return UnmixingSolution(
        components=components, whitening_used=whitened, config=config, method="ica"
    )
