"""Time-series containers shared by every part of the pipeline.

Arrays stored on these types are copied and marked read-only, so instances
can be shared freely between threads.
"""

from dataclasses import dataclass

import numpy as np

from src.core.exceptions import DimensionMismatch, InvalidParameter, NonFiniteSample


def frozen_array(values, ndim=None):
    """Float64 copy of ``values`` with the write flag cleared."""
    array = np.array(values, dtype=np.float64)
    if ndim is not None and array.ndim != ndim:
        raise DimensionMismatch(f"expected a {ndim}-d array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid: sample k sits at ``t0 + k * dt``."""

    t0: float
    dt: float
    n_samples: int

    def __post_init__(self):
        if not np.isfinite(self.t0) or not np.isfinite(self.dt) or self.dt <= 0:
            raise InvalidParameter(f"time step must be positive, got dt={self.dt}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise InvalidParameter(f"a grid needs at least 2 samples, got {self.n_samples}")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "n_samples", int(self.n_samples))

    @classmethod
    def spanning(cls, t0, duration, n_samples):
        """Grid of ``n_samples`` points covering ``[t0, t0 + duration)``."""
        return cls(t0=t0, dt=duration / n_samples, n_samples=n_samples)

    @property
    def duration(self):
        return self.dt * self.n_samples

    def times(self, window=None):
        k = np.arange(self.n_samples, dtype=np.float64)
        if window is not None:
            k = k[window.slice]
        return self.t0 + k * self.dt

    def window_for_duration(self, duration, start=0):
        return Window.of_duration(self, duration, start=start)


@dataclass(frozen=True)
class Window:
    """Half-open range of sample indices ``[start, stop)``."""

    start: int
    stop: int

    def __post_init__(self):
        if self.start < 0 or self.stop < self.start:
            raise InvalidParameter(f"invalid window [{self.start}, {self.stop})")
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "stop", int(self.stop))

    @classmethod
    def full(cls, n_samples):
        return cls(0, n_samples)

    @classmethod
    def of_duration(cls, grid, duration, start=0):
        """``round(duration / dt)`` samples from ``start``, clipped to the record."""
        length = int(round(duration / grid.dt))
        stop = min(grid.n_samples, start + max(length, 0))
        return cls(start, stop)

    @property
    def length(self):
        return self.stop - self.start

    @property
    def slice(self):
        return slice(self.start, self.stop)

    def fits(self, n_samples):
        return self.stop <= n_samples


@dataclass(frozen=True)
class Ensemble:
    """Raw measurements: ``channels[j, k]`` is detector j at sample k."""

    grid: TimeGrid
    channels: np.ndarray

    def __post_init__(self):
        channels = np.array(self.channels, dtype=np.float64)
        if channels.ndim == 1:
            channels = channels[np.newaxis, :]
        if channels.ndim != 2 or channels.shape[0] < 1:
            raise DimensionMismatch(f"channels must be M x n, got shape {channels.shape}")
        if channels.shape[1] != self.grid.n_samples:
            raise DimensionMismatch(
                f"channels hold {channels.shape[1]} samples, grid has {self.grid.n_samples}"
            )
        bad = np.argwhere(~np.isfinite(channels))
        if bad.size:
            channel, sample = bad[0]
            raise NonFiniteSample(f"channel {channel + 1} sample {sample} is not finite")
        object.__setattr__(self, "channels", frozen_array(channels))

    @property
    def n_channels(self):
        return self.channels.shape[0]

    @property
    def n_samples(self):
        return self.grid.n_samples


@dataclass(frozen=True)
class WhitenedEnsemble:
    """Channels with zero mean and identity covariance over ``window``.

    ``channels = whitening_matrix @ (raw - means)`` on the whole record; only
    the samples inside ``window`` were used to estimate the statistics.
    """

    grid: TimeGrid
    channels: np.ndarray
    means: np.ndarray
    whitening_matrix: np.ndarray
    window: Window

    def __post_init__(self):
        object.__setattr__(self, "channels", frozen_array(self.channels, ndim=2))
        object.__setattr__(self, "means", frozen_array(self.means, ndim=1))
        object.__setattr__(self, "whitening_matrix", frozen_array(self.whitening_matrix, ndim=2))

    @property
    def n_channels(self):
        return self.channels.shape[0]

    @property
    def n_samples(self):
        return self.grid.n_samples

    def windowed(self):
        return self.channels[:, self.window.slice]

    def dewhiten_row(self, direction):
        """Raw-space unmixing row ``a`` with ``a @ (raw - means) == direction @ channels``."""
        return self.whitening_matrix.T @ np.asarray(direction, dtype=np.float64)

    def to_whitened_direction(self, row):
        """Inverse of :meth:`dewhiten_row`."""
        return np.linalg.solve(self.whitening_matrix.T, np.asarray(row, dtype=np.float64))


@dataclass(frozen=True)
class CgfEstimate:
    z_values: np.ndarray
    k_values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z_values", frozen_array(self.z_values, ndim=1))
        object.__setattr__(self, "k_values", frozen_array(self.k_values, ndim=1))
