from dataclasses import dataclass, field, replace

import numpy as np

from src.core.exceptions import InvalidParameter
from src.signals.models import frozen_array


class ComponentStatus:
    OK = "ok"
    NO_CONVERGENCE = "no_convergence"
    NO_OSCILLATION = "no_oscillation"

    choices = (OK, NO_CONVERGENCE, NO_OSCILLATION)


def default_z_values():
    return tuple(round(0.2 * i, 10) for i in range(1, 11))


@dataclass(frozen=True)
class ZGrid:
    """Points at which empirical and reference cumulants are compared."""

    z_values: tuple = field(default_factory=default_z_values)

    def __post_init__(self):
        values = tuple(float(z) for z in self.z_values)
        if len(values) < 2:
            raise InvalidParameter("the z-grid needs at least two points")
        if any(not np.isfinite(z) or z <= 0 for z in values):
            raise InvalidParameter(f"z values must be finite and positive, got {values}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InvalidParameter(f"z values must be strictly increasing, got {values}")
        object.__setattr__(self, "z_values", values)

    def as_array(self):
        return np.array(self.z_values)

    def __len__(self):
        return len(self.z_values)


@dataclass(frozen=True)
class SicaConfig:
    z_grid: ZGrid = field(default_factory=ZGrid)
    periods_per_window: int = 2
    max_outer_iterations: int = 10
    freq_rel_tol: float = 1e-3
    newton_max_steps: int = 200
    newton_grad_tol: float = 1e-10
    restarts: int = 8
    rng_seed: int = 0

    def __post_init__(self):
        if self.periods_per_window < 1:
            raise InvalidParameter("periods_per_window must be at least 1")
        if self.max_outer_iterations < 1 or self.newton_max_steps < 1 or self.restarts < 1:
            raise InvalidParameter("iteration counts must be positive")
        if self.freq_rel_tol <= 0 or self.newton_grad_tol <= 0:
            raise InvalidParameter("tolerances must be positive")
        if self.rng_seed < 0:
            raise InvalidParameter("rng_seed must be non-negative")


@dataclass(frozen=True)
class RoundRecord:
    """One outer iteration of the window refinement."""

    window_start: int
    window_length: int
    dt: float
    frequency: float
    phase: float
    loss: float
    signal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "signal", frozen_array(self.signal, ndim=1))


@dataclass(frozen=True)
class ComponentResult:
    """One extracted source.

    ``direction`` is a unit vector in the coordinates of the solution's
    reference whitening; ``window_direction`` is the same unmixing expressed in
    the whitening of the component's own final window, which is also the one
    ``signal`` and ``loss`` refer to.
    """

    direction: np.ndarray
    signal: np.ndarray
    frequency: float | None = None
    phase: float | None = None
    loss: float = float("nan")
    frequency_history: tuple = ()
    loss_history: tuple = ()
    window_direction: np.ndarray | None = None
    unmixing_row: np.ndarray | None = None
    rounds: tuple = ()
    negentropy: float | None = None
    status: str = ComponentStatus.OK
    message: str = ""

    def __post_init__(self):
        object.__setattr__(self, "direction", frozen_array(self.direction, ndim=1))
        object.__setattr__(self, "signal", frozen_array(self.signal, ndim=1))
        for name in ("window_direction", "unmixing_row"):
            value = getattr(self, name)
            object.__setattr__(
                self, name, frozen_array(self.direction if value is None else value, ndim=1)
            )
        object.__setattr__(self, "frequency_history", tuple(self.frequency_history))
        object.__setattr__(self, "loss_history", tuple(self.loss_history))
        object.__setattr__(self, "rounds", tuple(self.rounds))

    @property
    def ok(self):
        return self.status == ComponentStatus.OK

    @property
    def final_round(self):
        return self.rounds[-1] if self.rounds else None

    def evolve(self, **changes):
        return replace(self, **changes)


def component_sort_key(component):
    frequency = component.frequency
    return (frequency is None, frequency if frequency is not None else 0.0)


@dataclass(frozen=True)
class UnmixingSolution:
    components: tuple
    whitening_used: object
    config: object
    method: str = "sica"

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(sorted(self.components, key=component_sort_key))
        )

    @property
    def frequencies(self):
        return [c.frequency for c in self.components]

    def ok_components(self):
        return [c for c in self.components if c.ok]

    def directions(self):
        return np.array([c.direction for c in self.components])
