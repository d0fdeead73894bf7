from dataclasses import dataclass

import numpy as np

from src.core.exceptions import InvalidParameter


class Contrast:
    LOG_COSH = "log_cosh"
    QUARTIC = "quartic"

    choices = (LOG_COSH, QUARTIC)


@dataclass(frozen=True)
class NegentropyConfig:
    """Settings of the fixed-point negentropy ICA baseline."""

    contrast: str = Contrast.LOG_COSH
    max_iterations: int = 500
    tol: float = 1e-8
    restarts: int = 8
    rng_seed: int = 0

    def __post_init__(self):
        if self.contrast not in Contrast.choices:
            raise InvalidParameter(f"unknown contrast {self.contrast!r}")
        if self.tol <= 0:
            raise InvalidParameter("tol must be positive")
        if self.max_iterations < 1 or self.restarts < 1:
            raise InvalidParameter("iteration counts must be positive")
        if self.rng_seed < 0:
            raise InvalidParameter("rng_seed must be non-negative")


@dataclass(frozen=True)
class DampedFit:
    """``amplitude * exp(-gamma t) * cos(omega t + phase) + offset``."""

    amplitude: float
    omega: float
    gamma: float
    phase: float
    offset: float
    residual_rms: float

    def __post_init__(self):
        if self.residual_rms < 0:
            raise InvalidParameter("residual_rms must be non-negative")

    def evaluate(self, times):
        return (
            self.amplitude
            * np.exp(-self.gamma * times)
            * np.cos(self.omega * times + self.phase)
            + self.offset
        )
