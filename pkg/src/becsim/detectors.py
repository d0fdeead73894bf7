import logging
import math

import numpy as np

from src.core.exceptions import PointOutsideGrid
from src.signals.models import Ensemble

logger = logging.getLogger(__name__)

DEFAULT_RADII = (0.3, 0.5, 0.7)
DEFAULT_ANGLES = (0.3, 1.4, 2.6)


def default_detector_points(trap):
    """Three generic points inside the cloud, away from every symmetry axis."""
    radius = trap.thomas_fermi_radius
    return [
        (fraction * radius * math.cos(angle), fraction * radius * math.sin(angle))
        for fraction, angle in zip(DEFAULT_RADII, DEFAULT_ANGLES)
    ]


def sample_detectors(movie, points):
    """One channel per point, read at the nearest grid node."""
    nodes = []
    for x, y in points:
        node = movie.spatial_grid.nearest_node(x, y)
        if node is None:
            raise PointOutsideGrid(
                f"detector ({x:g}, {y:g}) lies outside the grid "
                f"[-{movie.spatial_grid.half_width:g}, {movie.spatial_grid.half_width:g}]^2"
            )
        nodes.append(node)
    channels = [movie.frames[:, row, column] for row, column in nodes]
    for (x, y), channel in zip(points, channels):
        zeros = int(np.count_nonzero(channel == 0.0))
        if zeros:
            # Clipped samples are not a sum of cosines any more.
            logger.warning(
                "detector (%g, %g) reads zero density in %d of %d frames; "
                "the cloud edge crosses it",
                x,
                y,
                zeros,
                channel.size,
            )
    return Ensemble(grid=movie.time_grid, channels=channels)
