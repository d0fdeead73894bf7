from src.becsim.storage import load_movie
from src.core.exceptions import NoOscillation
from src.modefit.fitting import fit_amplitudes, symmetry_scores
from src.modefit.storage import save_mode_map
from src.pipeline.base import PipelineCommand
from src.pipeline.serializers import parse_float_list
from src.sica.models import ComponentStatus
from src.sica.serializers import load_solution


def solution_frequencies(path):
    solution = load_solution(path)
    frequencies = [
        component["frequency"]
        for component in solution["components"]
        if component["status"] == ComponentStatus.OK and component["frequency"] is not None
    ]
    if not frequencies:
        raise NoOscillation(f"{path}: no component with a recovered frequency")
    return sorted(frequencies)


class Command(PipelineCommand):
    """uv run manage.py fit
    uv run manage.py fit --movie runs/simulate --frequencies 1,1.4142,2 --csv
    """

    help = "Fit background and mode amplitude maps at known frequencies"
    name = "fit"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--movie", help="Movie directory (default: the simulate output)")
        source = parser.add_mutually_exclusive_group()
        source.add_argument("--frequencies", help="Comma-separated mode frequencies")
        source.add_argument("--solution", help="s-ICA solution JSON to take frequencies from")
        parser.add_argument("--csv", action="store_true", help="Also write x,y,C0..C3 rows")
        parser.add_argument("--sine", action="store_true", help="Fit sine columns too")

    def run(self, **options):
        output_dir = self.config.output_dir
        # Load the movie
        movie = load_movie(options["movie"] or output_dir / "simulate")
        # Frequencies given on the command line, else from the extract run
        if options["frequencies"]:
            frequencies = parse_float_list(options["frequencies"], "--frequencies")
        else:
            frequencies = solution_frequencies(
                options["solution"] or output_dir / "extract" / "solution_sica.json"
            )

        # Per-pixel fit and artifacts
        mode_map = fit_amplitudes(movie, frequencies, include_sine=options["sine"])
        written = save_mode_map(mode_map, self.output_dir, write_csv=options["csv"])
        if len(frequencies) == 3:
            scores = symmetry_scores(mode_map)
            if not scores:
                self.stdout.write("symmetry scores skipped: no node stays inside the cloud")
            for mode, score in scores.items():
                self.stdout.write(f"{mode}: symmetry score {score:.4f}")
        return written
