"""Movie directories: ``meta.json`` plus one little-endian float64 file per frame."""

import json
import logging
from pathlib import Path

import numpy as np

from src.becsim.models import DensityMovie, SpatialGrid
from src.becsim.serializers import MovieMetaSerializer
from src.core.exceptions import ArtifactMissing, DataFormatError
from src.core.serializers import dump_json, first_error
from src.signals.csv_io import write_ensemble_csv

logger = logging.getLogger(__name__)

FRAME_DTYPE = "<f8"
FRAMES_DIR = "frames"
META_FILE = "meta.json"
DETECTORS_FILE = "detectors.csv"


def frame_name(index):
    return f"{FRAMES_DIR}/{index:05d}.f64"


def save_movie(movie, directory, detectors=None):
    """Write the movie (and optionally its detector ensemble); return the paths written."""
    directory = Path(directory)
    (directory / FRAMES_DIR).mkdir(parents=True, exist_ok=True)

    written = []
    names = []
    for index, frame in enumerate(movie.frames):
        name = frame_name(index)
        np.ascontiguousarray(frame, dtype=FRAME_DTYPE).tofile(directory / name)
        names.append(name)
        written.append(directory / name)

    meta = MovieMetaSerializer(
        {
            "trap": movie.trap,
            "modes": movie.modes,
            "noise": movie.noise,
            "half_width": movie.spatial_grid.half_width,
            "n_points": movie.spatial_grid.n_points,
            "time_grid": movie.time_grid,
            "chemical_potentials": movie.chemical_potentials,
            "frame_format": FRAME_DTYPE,
            "frame_files": names,
        }
    ).data
    meta_path = directory / META_FILE
    meta_path.write_text(dump_json(meta))
    written.insert(0, meta_path)

    if detectors is not None:
        written.append(write_ensemble_csv(detectors, directory / DETECTORS_FILE))
    logger.info("saved %d frames to %s", movie.n_frames, directory)
    return written


def load_movie(directory):
    directory = Path(directory)
    meta_path = directory / META_FILE
    if not meta_path.is_file():
        raise ArtifactMissing(f"{directory}: no {META_FILE}, not a movie directory")
    try:
        payload = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{meta_path}:{exc.lineno}: {exc.msg}") from None
    serializer = MovieMetaSerializer(data=payload)
    if not serializer.is_valid():
        raise DataFormatError(f"{meta_path}: {first_error(serializer.errors)}")
    meta = serializer.validated_data
    if meta["frame_format"] != FRAME_DTYPE:
        raise DataFormatError(f"{meta_path}: unsupported frame format {meta['frame_format']!r}")

    sections = MovieMetaSerializer().fields
    time_grid = sections["time_grid"].create(meta["time_grid"])
    frame_files = meta["frame_files"]
    if len(frame_files) != time_grid.n_samples:
        raise DataFormatError(
            f"{meta_path}: {len(frame_files)} frame files for {time_grid.n_samples} samples"
        )
    grid = SpatialGrid(half_width=meta["half_width"], n_points=meta["n_points"])
    size = grid.n_points * grid.n_points
    frames = []
    for name in frame_files:
        path = directory / name
        if not path.is_file():
            raise ArtifactMissing(f"{path}: frame file missing")
        values = np.fromfile(path, dtype=FRAME_DTYPE)
        if values.size != size:
            raise DataFormatError(f"{path}: expected {size} values, found {values.size}")
        frames.append(values.reshape(grid.n_points, grid.n_points))

    return DensityMovie(
        spatial_grid=grid,
        time_grid=time_grid,
        frames=np.array(frames),
        chemical_potentials=meta["chemical_potentials"],
        trap=sections["trap"].create(meta["trap"]),
        modes=sections["modes"].create(meta["modes"]),
        noise=sections["noise"].create(meta["noise"]),
    )
