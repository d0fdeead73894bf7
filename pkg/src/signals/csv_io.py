"""CSV form of an ensemble: header ``t,x1,...,xM`` and one row per sample."""

import csv
import logging
from pathlib import Path

import numpy as np

from src.core.exceptions import DataFormatError, NonFiniteSample, UngriddedData
from src.signals.models import Ensemble, TimeGrid

logger = logging.getLogger(__name__)

# Relative tolerance on the spacing of consecutive time stamps.
GRID_TOLERANCE = 1e-9


def format_float(value):
    return f"{float(value):.17g}"


def read_ensemble_csv(path):
    path = Path(path)
    rows = []
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: file is empty") from None
        header = [name.strip() for name in header]
        if len(header) < 2 or header[0] != "t":
            raise DataFormatError(f"{path}:1: header must be 't,x1,...,xM', got {header}")
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataFormatError(
                    f"{path}:{line}: expected {len(header)} fields, found {len(row)}"
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise DataFormatError(f"{path}:{line}: non-numeric field in {row}") from None
            if not all(np.isfinite(values)):
                raise NonFiniteSample(f"{path}:{line}: non-finite sample")
            rows.append((line, values))

    if len(rows) < 2:
        raise DataFormatError(f"{path}: at least two samples are required")

    table = np.array([values for _, values in rows])
    times = table[:, 0]
    steps = np.diff(times)
    dt = (times[-1] - times[0]) / (len(times) - 1)
    if dt <= 0:
        raise UngriddedData(f"{path}: time column must increase")
    off_grid = np.flatnonzero(np.abs(steps - dt) >= GRID_TOLERANCE * dt)
    if off_grid.size:
        line = rows[off_grid[0] + 1][0]
        raise UngriddedData(f"{path}:{line}: time step deviates from the uniform grid dt={dt!r}")

    grid = TimeGrid(t0=times[0], dt=dt, n_samples=len(times))
    logger.debug("read %d samples x %d channels from %s", len(times), table.shape[1] - 1, path)
    return Ensemble(grid=grid, channels=table[:, 1:].T)


def write_series_csv(path, grid, series, prefix="x"):
    """Write ``series`` (rows are channels) against the grid times."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series = np.atleast_2d(np.asarray(series, dtype=np.float64))
    times = grid.times()
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t"] + [f"{prefix}{i + 1}" for i in range(series.shape[0])])
        for k, t in enumerate(times):
            writer.writerow([format_float(t)] + [format_float(v) for v in series[:, k]])
    return path


def write_ensemble_csv(ensemble, path, prefix="x"):
    return write_series_csv(path, ensemble.grid, ensemble.channels, prefix=prefix)


def write_table_csv(path, header, rows):
    """Plain numeric table: ``header`` then one formatted row per entry of ``rows``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(value) for value in row])
    return path
