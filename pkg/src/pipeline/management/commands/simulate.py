from src.becsim.detectors import sample_detectors
from src.becsim.simulation import generate_movie
from src.becsim.storage import save_movie
from src.pipeline.base import PipelineCommand


class Command(PipelineCommand):
    """uv run manage.py simulate --config run.json --seed 3 --out runs/seed3

    Writes ``<out>/simulate/``: meta.json, frames/, detectors.csv, manifest.json.
    """

    help = "Render the condensate movie and sample the detector channels"
    name = "simulate"

    def run(self, **options):
        config = self.config
        # Render the movie
        movie = generate_movie(
            config.trap, config.modes, config.noise, config.spatial_grid, config.time_grid
        )
        # Read the detector channels at their nearest nodes
        detectors = sample_detectors(movie, config.detector_points())
        # Write frames, channels and meta
        written = save_movie(movie, self.output_dir, detectors=detectors)
        self.stdout.write(
            f"{movie.n_frames} frames on a {config.spatial_grid.n_points}^2 grid, "
            f"{detectors.n_channels} detector channels"
        )
        return written
