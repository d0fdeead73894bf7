"""Single-frequency ICA: cumulant matching with iterative window refinement.

Each component is first found by Newton's method on the unit sphere of the
full-record whitening, restricted to the orthogonal complement of the
components found before it. Its frequency then sets the next statistics window
to a whole number of periods. The data are re-whitened over that window, a full
set of directions is deflated there, and the one oscillating closest to the
current frequency is kept. This repeats until the frequency settles.
"""

import logging
import math

import numpy as np
from scipy import linalg

from src.core.exceptions import DimensionMismatch, NoConvergence, NoOscillation, SignalTooShort
from src.sica.frequency import estimate_frequency
from src.sica.loss import loss_gradient_hessian, sica_loss
from src.sica.models import (
    ComponentResult,
    ComponentStatus,
    RoundRecord,
    SicaConfig,
    UnmixingSolution,
)
from src.signals.models import Window
from src.signals.transforms import (
    gram_schmidt,
    orthonormal_complement,
    orthonormalize,
    project,
    whiten,
)

logger = logging.getLogger(__name__)

INITIAL_DAMPING = 1e-6
MAX_DAMPING = 1e12
# Tangent gradient accepted as stationary once no damped step lowers the loss.
STALL_GRADIENT = 1e-6
# Relative gap below which two components are taken to follow the same source.
DISTINCT_FREQUENCY = 0.01


def _window_loss(samples, direction, z_grid):
    signal = direction @ samples
    return sica_loss(signal, Window.full(signal.size), z_grid)


def _newton_on_sphere(whitened, window, config, basis, constraints, start):
    """Damped Newton iteration for one restart; returns ``(direction, loss, steps)``."""
    z_grid = config.z_grid
    samples = whitened.channels[:, window.slice]
    direction = gram_schmidt(basis @ start, constraints)
    loss = _window_loss(samples, direction, z_grid)
    dimension = basis.shape[1]

    for step in range(config.newton_max_steps):
        gradient, hessian = loss_gradient_hessian(whitened, direction, window, z_grid)
        u = basis.T @ direction
        gradient_u = basis.T @ gradient
        hessian_u = basis.T @ hessian @ basis

        tangent = linalg.null_space(u[np.newaxis, :])
        tangent_gradient = tangent.T @ gradient_u
        gradient_norm = float(np.linalg.norm(tangent_gradient))
        if gradient_norm < config.newton_grad_tol:
            return direction, loss, step

        # Riemannian Hessian on the sphere: projected Hessian minus the radial curvature.
        tangent_hessian = tangent.T @ hessian_u @ tangent - (u @ gradient_u) * np.eye(dimension - 1)
        damping = 0.0 if linalg.eigvalsh(tangent_hessian)[0] > 0 else INITIAL_DAMPING

        while True:
            system = tangent_hessian + damping * np.eye(dimension - 1)
            try:
                factor = linalg.cho_factor(system)
            except linalg.LinAlgError:
                damping = max(damping * 10.0, INITIAL_DAMPING)
                if damping > MAX_DAMPING:
                    break
                continue
            move = -tangent @ linalg.cho_solve(factor, tangent_gradient)
            candidate = u + move
            candidate = gram_schmidt(basis @ (candidate / np.linalg.norm(candidate)), constraints)
            candidate_loss = _window_loss(samples, candidate, z_grid)
            if candidate_loss < loss:
                direction, loss = candidate, candidate_loss
                break
            damping = max(damping * 10.0, INITIAL_DAMPING)
            if damping > MAX_DAMPING:
                break

        if damping > MAX_DAMPING:
            if gradient_norm < STALL_GRADIENT:
                return direction, loss, step
            raise NoConvergence(
                f"no descent step found at gradient norm {gradient_norm:.3e}"
            )
        logger.debug("newton step %d: loss %.6e, gradient %.3e", step, loss, gradient_norm)

    raise NoConvergence(
        f"gradient still above {config.newton_grad_tol:g} after {config.newton_max_steps} steps"
    )


def extract_component(whitened, window=None, config=None, orthogonal_to=(), component_index=0):
    """Lowest-loss unit direction over seeded restarts, orthogonal to ``orthogonal_to``."""
    config = config or SicaConfig()
    window = window or whitened.window
    n_channels = whitened.n_channels
    constraints = orthonormalize(orthogonal_to)
    if len(constraints) >= n_channels:
        raise DimensionMismatch(
            f"{len(constraints)} constraints leave no direction in {n_channels} channels"
        )
    basis = orthonormal_complement(constraints, n_channels)

    if basis.shape[1] == 1:
        direction = gram_schmidt(basis[:, 0], constraints)
    else:
        candidates = []
        for restart in range(config.restarts):
            rng = np.random.default_rng([config.rng_seed, component_index, restart])
            start = rng.standard_normal(basis.shape[1])
            try:
                found, loss, steps = _newton_on_sphere(
                    whitened, window, config, basis, constraints, start / np.linalg.norm(start)
                )
            except NoConvergence as exc:
                logger.debug("component %d restart %d: %s", component_index, restart, exc)
                continue
            logger.debug(
                "component %d restart %d: loss %.6e after %d steps",
                component_index,
                restart,
                loss,
                steps,
            )
            candidates.append((loss, restart, found))
        if not candidates:
            raise NoConvergence(
                f"all {config.restarts} restarts of component {component_index} failed to converge"
            )
        _, _, direction = min(candidates, key=lambda candidate: candidate[:2])

    signal = project(whitened, direction)
    if signal[0] < 0:
        direction, signal = -direction, -signal
    loss = sica_loss(signal, window, config.z_grid)
    return ComponentResult(
        direction=direction,
        signal=signal,
        loss=loss,
        window_direction=direction,
        unmixing_row=whitened.dewhiten_row(direction),
    )


def _failed(n_channels, n_samples, status, exc, extracted=None, **history):
    logger.warning("component extraction stopped: %s", exc)
    if extracted is None:
        return ComponentResult(
            direction=np.zeros(n_channels),
            signal=np.zeros(n_samples),
            status=status,
            message=str(exc),
            **history,
        )
    return extracted.evolve(status=status, message=str(exc), **history)


def _window_candidates(whitened, window, config, index, grid):
    """Deflate a full set of directions in the window's own whitening.

    Returns ``(extracted, frequency, phase)`` for every direction that carries
    an oscillation; the sources are close to orthogonal here even when they are
    not over the full record.
    """
    candidates = []
    found = []
    for rank in range(whitened.n_channels):
        try:
            extracted = extract_component(whitened, window, config, found, index)
        except NoConvergence as exc:
            logger.debug("component %d candidate %d: %s", index, rank, exc)
            break
        found.append(extracted.direction)
        try:
            frequency, phase = estimate_frequency(extracted.signal, grid)
        except (NoOscillation, SignalTooShort) as exc:
            logger.debug("component %d candidate %d: %s", index, rank, exc)
            continue
        candidates.append((extracted, frequency, phase))
    return candidates


def _closest_candidate(candidates, target, claimed):
    """Candidate nearest ``target`` in frequency, preferring frequencies nobody holds yet."""

    def key(candidate):
        _, frequency, _ = candidate
        taken = any(abs(frequency - other) < DISTINCT_FREQUENCY * other for other in claimed)
        return (taken, abs(frequency - target) / target)

    return min(candidates, key=key)


def _refine_component(raw, reference, index, config, previous_directions, claimed=()):
    n_channels, n_samples = raw.n_channels, raw.n_samples
    window = Window.full(n_samples)
    rounds = []
    previous_frequency = None
    final = None

    for iteration in range(config.max_outer_iterations):
        whitened = whiten(raw, window)
        history = {
            "rounds": rounds,
            "frequency_history": [r.frequency for r in rounds],
            "loss_history": [r.loss for r in rounds],
        }
        if not rounds:
            # First pass: deflate against the earlier components in the reference whitening.
            try:
                extracted = extract_component(
                    whitened, window, config, previous_directions, index
                )
            except NoConvergence as exc:
                return _failed(n_channels, n_samples, ComponentStatus.NO_CONVERGENCE, exc, **history)
            try:
                frequency, phase = estimate_frequency(extracted.signal, raw.grid)
            except (NoOscillation, SignalTooShort) as exc:
                common = _common_direction(reference, whitened, extracted, previous_directions)
                return _failed(
                    n_channels,
                    n_samples,
                    ComponentStatus.NO_OSCILLATION,
                    exc,
                    extracted.evolve(direction=common),
                    **history,
                )
        else:
            # Refined windows: follow the source at the current frequency.
            candidates = _window_candidates(whitened, window, config, index, raw.grid)
            if not candidates:
                logger.info(
                    "component %d: no oscillating direction in window [%d, %d), keeping round %d",
                    index,
                    window.start,
                    window.stop,
                    len(rounds),
                )
                break
            extracted, frequency, phase = _closest_candidate(
                candidates, previous_frequency, claimed
            )
            if extracted.loss > rounds[-1].loss:
                logger.info(
                    "component %d: window [%d, %d) raises the loss to %.3e, keeping round %d",
                    index,
                    window.start,
                    window.stop,
                    extracted.loss,
                    len(rounds),
                )
                break

        rounds.append(
            RoundRecord(
                window_start=window.start,
                window_length=window.length,
                dt=raw.grid.dt,
                frequency=frequency,
                phase=phase,
                loss=extracted.loss,
                signal=extracted.signal,
            )
        )
        final = extracted.evolve(
            direction=_common_direction(reference, whitened, extracted, previous_directions),
            frequency=frequency,
            phase=phase,
        )
        logger.info(
            "component %d round %d: omega=%.6f loss=%.3e window=[%d, %d)",
            index,
            iteration + 1,
            frequency,
            extracted.loss,
            window.start,
            window.stop,
        )

        if previous_frequency is not None:
            if abs(frequency - previous_frequency) / previous_frequency < config.freq_rel_tol:
                break
        previous_frequency = frequency

        duration = config.periods_per_window * 2.0 * math.pi / frequency
        next_window = Window.of_duration(raw.grid, duration, start=0)
        if next_window.length < n_channels + 1:
            next_window = Window(0, min(n_samples, n_channels + 1))
        if next_window.length * raw.grid.dt < duration - raw.grid.dt:
            logger.warning(
                "component %d: %d periods of omega=%.4f exceed the record; using all %d samples",
                index,
                config.periods_per_window,
                frequency,
                n_samples,
            )
        if next_window == window:
            break
        window = next_window

    return final.evolve(
        rounds=rounds,
        frequency_history=[r.frequency for r in rounds],
        loss_history=[r.loss for r in rounds],
    )


def _common_direction(reference, whitened, extracted, previous_directions):
    """Express a window-space direction in the reference whitening, orthogonal to earlier ones."""
    common = reference.to_whitened_direction(whitened.dewhiten_row(extracted.window_direction))
    return gram_schmidt(common, previous_directions)


def sica_extract(raw, n_components, config=None):
    """Extract ``n_components`` single-frequency sources from ``raw``."""
    config = config or SicaConfig()
    if n_components < 1 or n_components > raw.n_channels:
        raise DimensionMismatch(
            f"cannot extract {n_components} components from {raw.n_channels} channels"
        )
    reference = whiten(raw, Window.full(raw.n_samples))
    components = []
    directions = []
    for index in range(n_components):
        claimed = [c.frequency for c in components if c.frequency is not None]
        component = _refine_component(raw, reference, index, config, directions, claimed)
        if np.linalg.norm(component.direction) > 0:
            directions.append(component.direction)
        components.append(component)
    logger.info(
        "s-ICA extracted frequencies %s",
        ", ".join("failed" if c.frequency is None else f"{c.frequency:.6f}" for c in components),
    )
    return UnmixingSolution(
        components=components, whitening_used=reference, config=config, method="sica"
    )
