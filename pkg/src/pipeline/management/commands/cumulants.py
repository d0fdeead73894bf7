from pathlib import Path

import numpy as np

from src.core.exceptions import DataFormatError
from src.pipeline.base import PipelineCommand
from src.pipeline.serializers import parse_float_list
from src.sica.reference import reference_cgf_values
from src.sica.serializers import load_solution
from src.signals.csv_io import read_ensemble_csv, write_table_csv
from src.signals.cumulants import empirical_cgf
from src.signals.models import Window


def final_windows(solution, n_samples):
    """Window of each component's last refinement round (whole record without rounds)."""
    windows = []
    for component in solution["components"]:
        if component["rounds"]:
            last = component["rounds"][-1]
            start = last["window_start"]
            windows.append(Window(start, min(n_samples, start + last["window_length"])))
        else:
            windows.append(Window.full(n_samples))
    return windows


class Command(PipelineCommand):
    """uv run manage.py cumulants --components runs/extract/components_sica.csv
    uv run manage.py cumulants --components c.csv --solution s.json --z 0,0.5,1
    """

    help = "Tabulate empirical cumulants of components against the cosine reference"
    name = "cumulants"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--components", required=True, help="Components CSV")
        parser.add_argument("--solution", help="Solution JSON giving each component's window")
        parser.add_argument("--z", help="Comma-separated z values (default: config z-grid)")

    def run(self, **options):
        # Load the components
        components = read_ensemble_csv(options["components"])
        if options["z"]:
            z_values = parse_float_list(options["z"], "--z")
        else:
            z_values = list(self.config.sica.z_grid.z_values)

        # Each component is judged over its own final window
        if options["solution"]:
            windows = final_windows(load_solution(options["solution"]), components.n_samples)
            if len(windows) != components.n_channels:
                raise DataFormatError(
                    f"solution has {len(windows)} components, "
                    f"CSV has {components.n_channels} channels"
                )
        else:
            windows = [Window.full(components.n_samples)] * components.n_channels

        # Tabulate K and K_ref
        reference = reference_cgf_values(z_values)
        columns = [
            empirical_cgf(channel, window, z_values).k_values
            for channel, window in zip(components.channels, windows)
        ]
        names = [f"K_s{index}" for index in range(1, components.n_channels + 1)]
        rows = np.column_stack([z_values, *columns, reference])
        path = self.output_dir / f"cumulants_{Path(options['components']).stem}.csv"
        write_table_csv(path, ["z", *names, "K_ref"], rows)

        for name, column in zip(names, columns):
            deviation = float(np.max(np.abs(column - reference)))
            self.stdout.write(f"{name}: max |K - K_ref| = {deviation:.3e}")
        return [path]
