"""Synthetic condensate movies: a Thomas-Fermi cloud carrying three collective modes.

Each frame is ``(mu - V) / g + sum_i f_i cos(omega_i t) shape_i + noise`` clipped
at zero, with ``mu`` re-solved per frame so the clipped density holds the
trap's atom number.
"""

import logging

import numpy as np
from scipy import optimize

from src.becsim.models import DensityMovie
from src.core.exceptions import BracketingFailed

logger = logging.getLogger(__name__)

ATOM_NUMBER_TOLERANCE = 1e-6
MAX_BRACKET_EXPANSIONS = 60


def unperturbed_chemical_potential(trap):
    return trap.chemical_potential


def mode_shapes(grid):
    """Dipole ``x``, quadrupole ``x^2 - y^2`` and breathing ``x^2 + y^2`` on the grid."""
    x, y = grid.mesh()
    return np.stack([x, x * x - y * y, x * x + y * y])


def thomas_fermi_profile(trap, grid, mu=None):
    mu = trap.chemical_potential if mu is None else mu
    x, y = grid.mesh()
    return np.clip((mu - trap.potential(x, y)) / trap.g, 0.0, None)


def noise_frame(noise, grid, frame_index):
    """Uniform noise for one frame; the counter is keyed on the frame index."""
    shape = (grid.n_points, grid.n_points)
    if noise.amplitude == 0:
        return np.zeros(shape)
    bit_generator = np.random.Philox(key=noise.rng_seed, counter=[0, 0, frame_index, 0])
    return np.random.Generator(bit_generator).uniform(-noise.amplitude, noise.amplitude, shape)


def perturbation_frame(modes, grid, t):
    weights = np.asarray(modes.amplitudes) * np.cos(np.asarray(modes.frequencies) * t)
    # Elementwise so mirrored nodes round identically.
    dipole, quadrupole, breathing = weights[:, None, None] * mode_shapes(grid)
    return dipole + quadrupole + breathing


def _clipped_density(trap, mu, offset):
    return np.clip(mu / trap.g + offset, 0.0, None)


def solve_chemical_potential(trap, perturbation, noise, grid):
    """Chemical potential whose clipped frame integrates to ``trap.n_atoms``."""
    x, y = grid.mesh()
    offset = perturbation + noise - trap.potential(x, y) / trap.g
    target = trap.n_atoms

    def excess(mu):
        return _clipped_density(trap, mu, offset).sum() * grid.cell_area - target

    mu_0 = trap.chemical_potential
    width = mu_0
    low, high = mu_0, mu_0
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if excess(low) <= 0 <= excess(high):
            break
        width *= 2.0
        low, high = mu_0 - width, mu_0 + width
    else:
        raise BracketingFailed(f"atom number {target} not bracketed around mu={mu_0:.6g}")

    mu = optimize.bisect(excess, low, high, xtol=1e-13, rtol=1e-15, maxiter=400)
    mismatch = abs(excess(mu)) / target
    if not np.isfinite(mismatch) or mismatch > ATOM_NUMBER_TOLERANCE:
        raise BracketingFailed(f"atom number off by {mismatch:.3e} relative at mu={mu:.12g}")
    return mu


def render_frame(trap, modes, noise, grid, t, *, frame_index):
    """Density frame at time ``t`` and the chemical potential used for it.

    ``frame_index`` keys the noise field, so frames of one movie can be
    rendered in any order.
    """
    perturbation = perturbation_frame(modes, grid, t)
    fluctuation = noise_frame(noise, grid, frame_index)
    mu = solve_chemical_potential(trap, perturbation, fluctuation, grid)
    x, y = grid.mesh()
    offset = perturbation + fluctuation - trap.potential(x, y) / trap.g
    return _clipped_density(trap, mu, offset), mu


def generate_movie(trap, modes, noise, grid, time_grid):
    times = time_grid.times()
    frames = np.empty((time_grid.n_samples, grid.n_points, grid.n_points))
    chemical_potentials = np.empty(time_grid.n_samples)
    for index, t in enumerate(times):
        frames[index], chemical_potentials[index] = render_frame(
            trap, modes, noise, grid, t, frame_index=index
        )
    logger.info(
        "rendered %d frames on a %dx%d grid, mu in [%.4f, %.4f]",
        time_grid.n_samples,
        grid.n_points,
        grid.n_points,
        chemical_potentials.min(),
        chemical_potentials.max(),
    )
    return DensityMovie(
        spatial_grid=grid,
        time_grid=time_grid,
        frames=frames,
        chemical_potentials=chemical_potentials,
        trap=trap,
        modes=modes,
        noise=noise,
    )
