import math
from dataclasses import dataclass, field

import numpy as np

from src.core.exceptions import InvalidParameter
from src.signals.models import TimeGrid, frozen_array

MODE_NAMES = ("dipole", "quadrupole", "breathing")


@dataclass(frozen=True)
class TrapParams:
    """Harmonic trap and condensate in units with hbar = m = omega_perp = 1."""

    m: float = 1.0
    omega_perp: float = 1.0
    g: float = 10.0
    n_atoms: float = 1000.0

    def __post_init__(self):
        for name in ("m", "omega_perp", "g", "n_atoms"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameter(f"{name} must be positive, got {value}")

    @property
    def chemical_potential(self):
        """Unperturbed Thomas-Fermi value: ``N = pi mu^2 / (g m omega^2)`` in 2D."""
        return math.sqrt(self.n_atoms * self.g * self.m * self.omega_perp**2 / math.pi)

    @property
    def thomas_fermi_radius(self):
        return math.sqrt(2.0 * self.chemical_potential / (self.m * self.omega_perp**2))

    def potential(self, x, y):
        return 0.5 * self.m * self.omega_perp**2 * (x * x + y * y)


@dataclass(frozen=True)
class ModeSpec:
    """Amplitudes and frequencies of the dipole, quadrupole and breathing modes."""

    amplitudes: tuple = (0.2, 0.2, 0.2)
    frequencies: tuple = (1.0, math.sqrt(2.0), 2.0)

    def __post_init__(self):
        amplitudes = tuple(float(f) for f in self.amplitudes)
        frequencies = tuple(float(w) for w in self.frequencies)
        if len(amplitudes) != 3 or len(frequencies) != 3:
            raise InvalidParameter("three mode amplitudes and three frequencies are required")
        if any(not math.isfinite(w) or w <= 0 for w in frequencies):
            raise InvalidParameter(f"mode frequencies must be positive, got {frequencies}")
        if len(set(frequencies)) != 3:
            raise InvalidParameter(f"mode frequencies must be distinct, got {frequencies}")
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "frequencies", frequencies)


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform noise on ``[-amplitude, amplitude]`` per grid node and frame."""

    amplitude: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise InvalidParameter(f"noise amplitude must be non-negative, got {self.amplitude}")
        if self.rng_seed < 0:
            raise InvalidParameter("rng_seed must be non-negative")


@dataclass(frozen=True)
class SpatialGrid:
    """``n_points`` x ``n_points`` nodes on ``[-half_width, half_width]^2``.

    Frames are indexed ``[row, column] = [y, x]``.
    """

    half_width: float
    n_points: int = 101

    def __post_init__(self):
        if not math.isfinite(self.half_width) or self.half_width <= 0:
            raise InvalidParameter(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise InvalidParameter(f"n_points must be odd and at least 3, got {self.n_points}")

    @classmethod
    def for_trap(cls, trap, n_points=101, scale=1.3):
        return cls(half_width=scale * trap.thomas_fermi_radius, n_points=n_points)

    @property
    def spacing(self):
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def cell_area(self):
        return self.spacing**2

    @property
    def axis(self):
        # Integer offsets keep the axis exactly antisymmetric about the origin.
        centre = (self.n_points - 1) // 2
        return (np.arange(self.n_points) - centre) * self.spacing

    def mesh(self):
        return np.meshgrid(self.axis, self.axis, indexing="xy")

    def nearest_node(self, x, y):
        """``(row, column)`` of the node closest to ``(x, y)``, or None outside the grid."""
        limit = self.half_width + self.spacing / 2
        if abs(x) > limit or abs(y) > limit:
            return None
        centre = (self.n_points - 1) // 2
        column = int(round(x / self.spacing)) + centre
        row = int(round(y / self.spacing)) + centre
        return min(max(row, 0), self.n_points - 1), min(max(column, 0), self.n_points - 1)


@dataclass(frozen=True)
class DensityMovie:
    """Simulated density ``frames[k, row, column]`` at time ``time_grid.times()[k]``."""

    spatial_grid: SpatialGrid
    time_grid: TimeGrid
    frames: np.ndarray
    chemical_potentials: np.ndarray
    trap: TrapParams = field(default_factory=TrapParams)
    modes: ModeSpec = field(default_factory=ModeSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        frames = frozen_array(self.frames, ndim=3)
        shape = (self.time_grid.n_samples, self.spatial_grid.n_points, self.spatial_grid.n_points)
        if frames.shape != shape:
            raise InvalidParameter(f"frames have shape {frames.shape}, expected {shape}")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(
            self, "chemical_potentials", frozen_array(self.chemical_potentials, ndim=1)
        )

    @property
    def n_frames(self):
        return self.frames.shape[0]

    def atom_numbers(self):
        return self.frames.sum(axis=(1, 2)) * self.spatial_grid.cell_area
