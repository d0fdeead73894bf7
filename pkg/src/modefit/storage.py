import logging
from pathlib import Path

import numpy as np

from src.becsim.storage import FRAME_DTYPE
from src.core.serializers import dump_json
from src.modefit.fitting import symmetry_scores
from src.modefit.serializers import ModeMapMetaSerializer
from src.signals.csv_io import write_table_csv

logger = logging.getLogger(__name__)

META_FILE = "modemap.json"
CSV_FILE = "modemap.csv"


def _named_arrays(mode_map):
    arrays = {"c0": mode_map.background}
    for index, amplitude in enumerate(mode_map.amplitudes, start=1):
        arrays[f"c{index}"] = amplitude
    if mode_map.sine is not None:
        for index, amplitude in enumerate(mode_map.sine, start=1):
            arrays[f"s{index}"] = amplitude
    arrays["residual_rms"] = mode_map.residual_rms
    return arrays


def save_mode_map(mode_map, directory, write_csv=False):
    """Write ``modemap.json`` and one flat array per map; return the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    written = []
    files = {}
    arrays = _named_arrays(mode_map)
    for name, values in arrays.items():
        path = directory / f"{name}.f64"
        np.ascontiguousarray(values, dtype=FRAME_DTYPE).tofile(path)
        files[name] = path.name
        written.append(path)

    scores = symmetry_scores(mode_map) if len(mode_map.frequencies) == 3 else {}
    meta = ModeMapMetaSerializer(
        {
            "half_width": mode_map.spatial_grid.half_width,
            "n_points": mode_map.spatial_grid.n_points,
            "frequencies": mode_map.frequencies,
            "array_format": FRAME_DTYPE,
            "arrays": files,
            "symmetry_scores": scores,
            "clipped_points": int(mode_map.clipped.sum()),
        }
    ).data
    meta_path = directory / META_FILE
    meta_path.write_text(dump_json(meta))
    written.insert(0, meta_path)

    if write_csv:
        written.append(_write_csv(mode_map, directory / CSV_FILE))
    logger.info("saved mode map to %s, symmetry scores %s", directory, scores)
    return written


def _write_csv(mode_map, path):
    x, y = mode_map.spatial_grid.mesh()
    columns = [x, y, mode_map.background, *mode_map.amplitudes]
    header = ["x", "y", "C0"] + [f"C{i}" for i in range(1, len(mode_map.amplitudes) + 1)]
    rows = np.stack([column.reshape(-1) for column in columns], axis=1)
    return write_table_csv(path, header, rows)
