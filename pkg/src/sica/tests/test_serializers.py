import json
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from src.core.exceptions import ArtifactMissing, DataFormatError, InvalidParameter
from src.core.serializers import dump_json
from src.sica.extraction import sica_extract
from src.sica.models import SicaConfig, UnmixingSolution, ZGrid
from src.sica.serializers import SicaConfigSerializer, load_solution, solution_to_dict
from src.signals.models import Ensemble, TimeGrid


class ZGridTests(SimpleTestCase):
    def test_default_grid(self):
        grid = ZGrid()
        self.assertEqual(len(grid), 10)
        self.assertAlmostEqual(grid.z_values[0], 0.2)
        self.assertAlmostEqual(grid.z_values[-1], 2.0)

    def test_invalid_grids(self):
        for values in ((1.0,), (0.5, 0.5), (-0.2, 0.4), (0.4, 0.2)):
            with self.subTest(values=values), self.assertRaises(InvalidParameter):
                ZGrid(values)


class SicaConfigSerializerTests(SimpleTestCase):
    def test_empty_section_gives_defaults(self):
        serializer = SicaConfigSerializer(data={})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), SicaConfig())

    def test_unknown_key_rejected(self):
        serializer = SicaConfigSerializer(data={"restart": 3})
        self.assertFalse(serializer.is_valid())
        self.assertIn("restart", serializer.errors)

    def test_invalid_values_rejected(self):
        for data in (
            {"z_values": [0.4, 0.2]},
            {"periods_per_window": 0},
            {"freq_rel_tol": 0.0},
            {"newton_grad_tol": -1.0},
        ):
            with self.subTest(data=data):
                self.assertFalse(SicaConfigSerializer(data=data).is_valid())

    def test_representation_of_config(self):
        data = SicaConfigSerializer(SicaConfig(restarts=3)).data
        self.assertEqual(data["restarts"], 3)
        self.assertEqual(len(data["z_values"]), 10)


class SolutionFileTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def make_solution(self):
        grid = TimeGrid(0.0, 0.02, 1200)
        t = grid.times()
        raw = Ensemble(grid, [np.cos(t) + 0.5 * np.cos(2.2 * t), 0.3 * np.cos(t) + np.cos(2.2 * t)])
        return sica_extract(raw, 2, SicaConfig(restarts=2))

    def test_solution_file_carries_rounds_and_status(self):
        solution = self.make_solution()
        path = self.dir / "solution.json"
        path.write_text(dump_json(solution_to_dict(solution)))
        loaded = load_solution(path)
        self.assertEqual(loaded["method"], "sica")
        self.assertEqual(loaded["grid"]["n_samples"], 1200)
        self.assertEqual(len(loaded["components"]), 2)
        for stored, component in zip(loaded["components"], solution.components):
            self.assertEqual(stored["status"], component.status)
            self.assertEqual(stored["frequency"], component.frequency)
            self.assertEqual(len(stored["rounds"]), len(component.rounds))
            for record in stored["rounds"]:
                self.assertEqual(record["window_start"], 0)
        self.assertTrue(path.read_text().endswith("}\n"))

    def test_failed_component_loss_serialized_as_null(self):
        solution = self.make_solution()
        failed = solution.components[0].evolve(loss=math.nan, frequency=None, status="no_convergence")
        broken = UnmixingSolution(
            components=[failed], whitening_used=solution.whitening_used, config=solution.config
        )
        data = json.loads(dump_json(solution_to_dict(broken)))
        self.assertIsNone(data["components"][0]["loss"])
        self.assertIsNone(data["components"][0]["frequency"])

    def test_missing_and_malformed_files(self):
        with self.assertRaises(ArtifactMissing):
            load_solution(self.dir / "absent.json")
        broken = self.dir / "broken.json"
        broken.write_text("{\n  \"method\": ")
        with self.assertRaisesMessage(DataFormatError, "broken.json:2:"):
            load_solution(broken)
        incomplete = self.dir / "incomplete.json"
        incomplete.write_text(json.dumps({"method": "sica"}))
        with self.assertRaises(DataFormatError):
            load_solution(incomplete)
