import math

import numpy as np
from django.test import SimpleTestCase

from src.baseline.models import Contrast, NegentropyConfig
from src.baseline.negentropy import gaussian_contrast_mean, negentropy, negentropy_extract
from src.baseline.serializers import NegentropyConfigSerializer
from src.core.exceptions import DimensionMismatch, InvalidParameter
from src.sica.models import ComponentStatus
from src.signals.models import Ensemble, TimeGrid


def uniform_and_gaussian(seed=0, n_samples=5000):
    rng = np.random.default_rng(seed)
    sources = np.array(
        [rng.uniform(-math.sqrt(3), math.sqrt(3), n_samples), rng.standard_normal(n_samples)]
    )
    mixing = np.array([[1.0, 0.5], [0.3, 1.0]])
    return Ensemble(TimeGrid(0.0, 0.01, n_samples), mixing @ sources), sources


class GaussianContrastTests(SimpleTestCase):
    def test_log_cosh_expectation(self):
        samples = np.random.default_rng(1).standard_normal(1_000_000)
        expected = float(np.mean(np.log(np.cosh(samples))))
        self.assertAlmostEqual(gaussian_contrast_mean(Contrast.LOG_COSH), expected, delta=2e-3)
        self.assertAlmostEqual(gaussian_contrast_mean(Contrast.LOG_COSH), 0.3746, delta=1e-4)

    def test_quartic_expectation(self):
        self.assertEqual(gaussian_contrast_mean(Contrast.QUARTIC), 0.75)

    def test_negentropy_non_negative_and_small_for_gaussian(self):
        samples = np.random.default_rng(2).standard_normal(200_000)
        value = negentropy(samples)
        self.assertGreaterEqual(value, 0.0)
        self.assertLess(value, 1e-5)
        self.assertGreater(negentropy(np.sign(samples)), 1e-3)


class NegentropyExtractTests(SimpleTestCase):
    def test_uniform_source_separated_from_gaussian(self):
        for contrast in (Contrast.LOG_COSH, Contrast.QUARTIC):
            raw, sources = uniform_and_gaussian()
            solution = negentropy_extract(raw, 2, NegentropyConfig(contrast=contrast))
            best = max(abs(np.corrcoef(c.signal, sources[0])[0, 1]) for c in solution.components)
            with self.subTest(contrast=contrast):
                self.assertGreater(best, 0.95)
                self.assertEqual(solution.method, "ica")

    def test_components_orthonormal_with_non_negative_negentropy(self):
        raw, _ = uniform_and_gaussian(seed=3)
        solution = negentropy_extract(raw, 2)
        directions = solution.directions()
        np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)
        self.assertLess(abs(directions[0] @ directions[1]), 1e-8)
        for component in solution.components:
            self.assertGreaterEqual(component.negentropy, 0.0)
            self.assertGreaterEqual(component.loss, 0.0)

    def test_gaussian_inputs_have_no_structure(self):
        rng = np.random.default_rng(9)
        mixing = rng.standard_normal((2, 2)) + 2 * np.eye(2)
        raw = Ensemble(TimeGrid(0.0, 0.01, 20000), mixing @ rng.standard_normal((2, 20000)))
        solution = negentropy_extract(raw, 2)
        for component in solution.components:
            if component.status == ComponentStatus.NO_CONVERGENCE:
                continue
            self.assertLess(component.negentropy, 1e-3)

    def test_oscillating_sources_get_frequencies(self):
        grid = TimeGrid(0.0, 4 * math.pi / 800, 800)
        t = grid.times()
        raw = Ensemble(grid, [np.cos(t) + 0.4 * np.cos(3 * t), 0.5 * np.cos(t) + np.cos(3 * t)])
        solution = negentropy_extract(raw, 2)
        frequencies = [c.frequency for c in solution.components if c.ok]
        self.assertTrue(frequencies)
        self.assertEqual(frequencies, sorted(frequencies))

    def test_component_count_checked(self):
        raw, _ = uniform_and_gaussian(n_samples=100)
        with self.assertRaises(DimensionMismatch):
            negentropy_extract(raw, 3)


class NegentropyConfigTests(SimpleTestCase):
    def test_invalid_tolerance(self):
        with self.assertRaises(InvalidParameter):
            NegentropyConfig(tol=0.0)

    def test_serializer_defaults_and_unknown_keys(self):
        serializer = NegentropyConfigSerializer(data={"contrast": "quartic"})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.save(), NegentropyConfig(contrast=Contrast.QUARTIC))
        self.assertFalse(NegentropyConfigSerializer(data={"contrast": "cubic"}).is_valid())
        self.assertFalse(NegentropyConfigSerializer(data={"step": 1}).is_valid())
