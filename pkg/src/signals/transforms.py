import logging

import numpy as np
from scipy import linalg

from src.core.exceptions import DimensionMismatch, RankDeficient, WindowTooShort
from src.signals.models import Window, WhitenedEnsemble

logger = logging.getLogger(__name__)

# Smallest admissible covariance eigenvalue relative to the largest.
RANK_TOLERANCE = 1e-12


def whiten(raw, window=None):
    """Centre and ZCA-whiten ``raw`` using the statistics of ``window``.

    The covariance is the population estimate (divided by the window length)
    and the whitening matrix is its symmetric inverse square root, so the map
    does not depend on an arbitrary eigenbasis. ``raw`` may itself be a
    WhitenedEnsemble.
    """
    window = window or Window.full(raw.grid.n_samples)
    n_channels = raw.channels.shape[0]
    if not window.fits(raw.grid.n_samples):
        raise WindowTooShort(
            f"window [{window.start}, {window.stop}) exceeds {raw.grid.n_samples} samples"
        )
    if window.length < n_channels + 1:
        raise WindowTooShort(
            f"{window.length} samples cannot whiten {n_channels} channels"
        )

    samples = raw.channels[:, window.slice]
    means = samples.mean(axis=1)
    centred = samples - means[:, np.newaxis]
    covariance = centred @ centred.T / window.length

    eigenvalues, eigenvectors = linalg.eigh(covariance)
    largest = eigenvalues[-1]
    if largest <= 0 or eigenvalues[0] <= RANK_TOLERANCE * largest:
        raise RankDeficient(
            f"channel covariance is singular (eigenvalues {eigenvalues.min():.3e}"
            f" .. {largest:.3e}); detectors are redundant"
        )
    whitening_matrix = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T
    whitening_matrix = (whitening_matrix + whitening_matrix.T) / 2

    channels = whitening_matrix @ (raw.channels - means[:, np.newaxis])
    # Remove the rounding residue of the mean inside the window.
    channels -= channels[:, window.slice].mean(axis=1, keepdims=True)
    logger.debug(
        "whitened %d channels over [%d, %d), condition %.3e",
        n_channels,
        window.start,
        window.stop,
        largest / eigenvalues[0],
    )
    return WhitenedEnsemble(
        grid=raw.grid,
        channels=channels,
        means=means,
        whitening_matrix=whitening_matrix,
        window=window,
    )


def project(whitened, direction):
    """Per-sample dot product of ``direction`` with the whitened channels."""
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != (whitened.n_channels,):
        raise DimensionMismatch(
            f"direction has shape {direction.shape}, expected ({whitened.n_channels},)"
        )
    return direction @ whitened.channels


def orthonormal_complement(vectors, dimension):
    """Orthonormal basis (as columns) of the complement of ``vectors``."""
    if not len(vectors):
        return np.eye(dimension)
    stacked = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    return linalg.null_space(stacked)


def gram_schmidt(direction, against):
    """Remove the components of ``direction`` along the unit vectors ``against`` and renormalize."""
    result = np.array(direction, dtype=np.float64)
    for _ in range(2):
        for vector in against:
            result -= (result @ vector) * vector
    norm = np.linalg.norm(result)
    if norm == 0:
        raise DimensionMismatch("direction lies inside the span of the constraints")
    return result / norm


def orthonormalize(vectors):
    """Orthonormal vectors spanning the same space, in order (modified Gram-Schmidt)."""
    basis = []
    for vector in vectors:
        basis.append(gram_schmidt(vector, basis))
    return basis
