"""Per-point harmonic fits of a density movie at known frequencies."""

import logging

import numpy as np
from scipy import linalg

from src.becsim.models import MODE_NAMES
from src.core.exceptions import (
    EmptyMask,
    IllConditionedBasis,
    InvalidParameter,
    SignalTooShort,
)
from src.modefit.models import CLIPPED_FRACTION, ModeMap

logger = logging.getLogger(__name__)

MIN_FRAMES = 8
MAX_CONDITION = 1e8


def design_matrix(times, frequencies, include_sine=False):
    """Columns ``1, cos(w_1 t), ..., cos(w_k t)`` then optionally ``sin(w_i t)``."""
    phases = np.outer(times, frequencies)
    columns = [np.ones((len(times), 1)), np.cos(phases)]
    if include_sine:
        columns.append(np.sin(phases))
    return np.hstack(columns)


def fit_amplitudes(movie, frequencies, include_sine=False):
    frequencies = np.asarray(frequencies, dtype=np.float64).reshape(-1)
    if frequencies.size == 0 or not np.all(np.isfinite(frequencies)) or np.any(frequencies <= 0):
        raise InvalidParameter(f"frequencies must be positive, got {frequencies.tolist()}")
    if movie.n_frames < MIN_FRAMES:
        raise SignalTooShort(f"need at least {MIN_FRAMES} frames, got {movie.n_frames}")

    design = design_matrix(movie.time_grid.times(), frequencies, include_sine)
    normal = design.T @ design
    condition = np.linalg.cond(normal)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise IllConditionedBasis(
            f"normal matrix condition number {condition:.3e} exceeds {MAX_CONDITION:.0e} "
            f"for frequencies {frequencies.tolist()}"
        )

    n_points = movie.spatial_grid.n_points
    traces = movie.frames.reshape(movie.n_frames, -1)
    coefficients = linalg.cho_solve(linalg.cho_factor(normal), design.T @ traces)
    residuals = traces - design @ coefficients
    residual_rms = np.sqrt(np.mean(residuals**2, axis=0))
    zero_fraction = np.mean(traces == 0.0, axis=0)
    clipped = zero_fraction > CLIPPED_FRACTION

    k = frequencies.size
    maps = coefficients.reshape(-1, n_points, n_points)
    logger.info(
        "fitted %d points at frequencies %s, median residual rms %.3e, %d clipped",
        traces.shape[1],
        np.array2string(frequencies, precision=6),
        float(np.median(residual_rms)),
        int(clipped.sum()),
    )
    return ModeMap(
        spatial_grid=movie.spatial_grid,
        background=maps[0],
        amplitudes=maps[1 : k + 1],
        frequencies=frequencies,
        residual_rms=residual_rms.reshape(n_points, n_points),
        zero_fraction=zero_fraction.reshape(n_points, n_points),
        sine=maps[k + 1 :] if include_sine else None,
    )


def cloud_mask(mode_map):
    """Nodes that never read zero, where the harmonic model holds in every frame."""
    return mode_map.zero_fraction == 0.0


def ideal_pattern(mode, grid, mask=None):
    """Reference shape of a mode; the breathing profile is centred over ``mask``."""
    x, y = grid.mesh()
    if mode == "dipole":
        return x
    if mode == "quadrupole":
        return x * x - y * y
    if mode == "breathing":
        radius_squared = x * x + y * y
        if mask is None:
            return radius_squared - radius_squared.mean()
        if not mask.any():
            raise EmptyMask("cannot centre the breathing pattern over an empty mask")
        return radius_squared - radius_squared[mask].mean()
    raise InvalidParameter(f"unknown mode {mode!r}, expected one of {MODE_NAMES}")


def mode_symmetry_score(amplitude_map, mode, grid, mask=None):
    """Normalized inner product in ``[-1, 1]`` of a map with the mode's ideal shape.

    Both are taken relative to their mean over ``mask``: a spatially uniform
    term is the chemical potential following the cloud, not mode structure.
    """
    amplitude_map = np.asarray(amplitude_map, dtype=np.float64)
    if mask is not None and not np.any(mask):
        raise EmptyMask(f"no grid node left to score the {mode} map")
    pattern = ideal_pattern(mode, grid, mask)
    if mask is not None:
        amplitude_map, pattern = amplitude_map[mask], pattern[mask]
    amplitude_map = amplitude_map - amplitude_map.mean()
    pattern = pattern - pattern.mean()
    norm = np.linalg.norm(amplitude_map) * np.linalg.norm(pattern)
    if norm == 0:
        return 0.0
    return float(np.clip(np.vdot(amplitude_map, pattern) / norm, -1.0, 1.0))


def symmetry_scores(mode_map, mask=None):
    """Score of each fitted map against the mode expected at its position.

    Empty when no node is left to score, e.g. when clipping reaches every node.
    """
    mask = cloud_mask(mode_map) if mask is None else mask
    if not np.any(mask):
        logger.warning(
            "no grid node stays inside the cloud in every frame (%d of %d clipped); "
            "symmetry scores skipped",
            int(mode_map.clipped.sum()),
            mode_map.clipped.size,
        )
        return {}
    return {
        mode: mode_symmetry_score(amplitude, mode, mode_map.spatial_grid, mask)
        for mode, amplitude in zip(MODE_NAMES, mode_map.amplitudes)
    }
