import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from src.core.exceptions import DataFormatError, NonFiniteSample, UngriddedData
from src.signals.csv_io import read_ensemble_csv, write_ensemble_csv, write_table_csv
from src.signals.models import Ensemble, TimeGrid


class EnsembleCsvTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def write(self, text):
        path = self.dir / "data.csv"
        path.write_text(text)
        return path

    def test_written_ensemble_reads_back(self):
        rng = np.random.default_rng(5)
        ensemble = Ensemble(TimeGrid(0.5, 0.01, 40), rng.standard_normal((3, 40)))
        path = write_ensemble_csv(ensemble, self.dir / "out.csv")
        loaded = read_ensemble_csv(path)
        np.testing.assert_array_equal(loaded.channels, ensemble.channels)
        self.assertAlmostEqual(loaded.grid.dt, 0.01, places=14)
        self.assertEqual(path.read_text().splitlines()[0], "t,x1,x2,x3")

    def test_short_row_names_its_line(self):
        path = self.write("t,x1,x2\n0,1,2\n1,3\n2,4,5\n")
        with self.assertRaisesMessage(DataFormatError, "data.csv:3:"):
            read_ensemble_csv(path)

    def test_non_numeric_field_names_its_line(self):
        path = self.write("t,x1\n0,1\n1,2\n2,abc\n")
        with self.assertRaisesMessage(DataFormatError, "data.csv:4:"):
            read_ensemble_csv(path)

    def test_bad_header_rejected(self):
        with self.assertRaisesMessage(DataFormatError, ":1:"):
            read_ensemble_csv(self.write("time,x1\n0,1\n1,2\n"))

    def test_non_uniform_time_column(self):
        path = self.write("t,x1\n0,1\n1,2\n2.5,3\n3,4\n")
        with self.assertRaises(UngriddedData):
            read_ensemble_csv(path)

    def test_non_finite_sample(self):
        with self.assertRaises(NonFiniteSample):
            read_ensemble_csv(self.write("t,x1\n0,1\n1,nan\n"))

    def test_empty_file(self):
        with self.assertRaises(DataFormatError):
            read_ensemble_csv(self.write(""))

    def test_table_uses_round_trip_precision(self):
        path = write_table_csv(self.dir / "table.csv", ["a", "b"], [[0.1, 1 / 3]])
        row = path.read_text().splitlines()[1].split(",")
        self.assertEqual(float(row[1]), 1 / 3)
        self.assertEqual(float(row[0]), 0.1)
