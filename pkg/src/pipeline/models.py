from dataclasses import dataclass, field
from pathlib import Path

from src.baseline.models import NegentropyConfig
from src.becsim.detectors import default_detector_points
from src.becsim.models import ModeSpec, NoiseSpec, SpatialGrid, TrapParams
from src.sica.models import SicaConfig
from src.signals.models import TimeGrid


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline run depends on, validated as a whole."""

    trap: TrapParams
    modes: ModeSpec
    noise: NoiseSpec
    spatial_grid: SpatialGrid
    time_grid: TimeGrid
    sica: SicaConfig
    negentropy: NegentropyConfig
    detectors: tuple
    output_dir: Path
    digest: str = field(default="", compare=False)

    def detector_points(self):
        return list(self.detectors) or default_detector_points(self.trap)
