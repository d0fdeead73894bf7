from dataclasses import dataclass

import numpy as np

from src.becsim.models import MODE_NAMES
from src.signals.models import frozen_array

# Points with more zero frames than this fraction are treated as clipped.
CLIPPED_FRACTION = 0.2


@dataclass(frozen=True)
class ModeMap:
    """Per-point decomposition ``n(r, t) = C0(r) + sum_i Ci(r) cos(omega_i t)``.

    ``zero_fraction`` is the share of frames in which each node read exactly
    zero. ``sine`` holds the ``sin(omega_i t)`` maps when they were fitted,
    else None.
    """

    spatial_grid: object
    background: np.ndarray
    amplitudes: np.ndarray
    frequencies: np.ndarray
    residual_rms: np.ndarray
    zero_fraction: np.ndarray
    sine: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "background", frozen_array(self.background, ndim=2))
        object.__setattr__(self, "amplitudes", frozen_array(self.amplitudes, ndim=3))
        object.__setattr__(self, "frequencies", frozen_array(self.frequencies, ndim=1))
        object.__setattr__(self, "residual_rms", frozen_array(self.residual_rms, ndim=2))
        object.__setattr__(self, "zero_fraction", frozen_array(self.zero_fraction, ndim=2))
        if self.sine is not None:
            object.__setattr__(self, "sine", frozen_array(self.sine, ndim=3))

    @property
    def clipped(self):
        return self.zero_fraction > CLIPPED_FRACTION

    def amplitude(self, mode):
        return self.amplitudes[MODE_NAMES.index(mode)]

