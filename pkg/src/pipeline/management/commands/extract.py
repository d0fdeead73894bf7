import numpy as np

from src.baseline.negentropy import negentropy_extract
from src.core.serializers import dump_json
from src.pipeline.base import PipelineCommand
from src.sica.extraction import sica_extract
from src.sica.serializers import solution_to_dict
from src.signals.csv_io import read_ensemble_csv, write_series_csv


def round_one_signal(component):
    return component.rounds[0].signal if component.rounds else component.signal


class Command(PipelineCommand):
    """uv run manage.py extract --method sica
    uv run manage.py extract --method ica --detectors data.csv --components 2
    """

    help = "Separate detector channels into single-frequency components"
    name = "extract"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--detectors", help="Ensemble CSV (default: the simulate output)")
        parser.add_argument("--method", choices=("sica", "ica"), default="sica")
        parser.add_argument("--components", type=int, help="Number of components")

    def run(self, **options):
        # Load the detector record
        path = options["detectors"] or self.config.output_dir / "simulate" / "detectors.csv"
        raw = read_ensemble_csv(path)
        n_components = options["components"] or raw.n_channels
        method = options["method"]
        # Separate the channels
        if method == "sica":
            solution = sica_extract(raw, n_components, self.config.sica)
        else:
            solution = negentropy_extract(
                raw, n_components, self.config.negentropy, z_grid=self.config.sica.z_grid
            )

        # Write the solution and component series
        solution_path = self.output_dir / f"solution_{method}.json"
        solution_path.write_text(dump_json(solution_to_dict(solution)))
        written = [solution_path]
        signals = np.array([c.signal for c in solution.components])
        written.append(
            write_series_csv(
                self.output_dir / f"components_{method}.csv", raw.grid, signals, prefix="s"
            )
        )
        if method == "sica":
            first = np.array([round_one_signal(c) for c in solution.components])
            written.append(
                write_series_csv(
                    self.output_dir / "components_sica_round1.csv", raw.grid, first, prefix="s"
                )
            )

        # Summary per component
        for index, component in enumerate(solution.components, start=1):
            frequency = "-" if component.frequency is None else f"{component.frequency:.6f}"
            self.stdout.write(
                f"s{index}: status={component.status} omega={frequency} loss={component.loss:.3e}"
            )
        return written
