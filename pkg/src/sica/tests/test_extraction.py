import math

import numpy as np
from django.test import SimpleTestCase, tag

from src.core.exceptions import DimensionMismatch, NoConvergence
from src.sica.extraction import extract_component, sica_extract
from src.sica.models import ComponentStatus, SicaConfig
from src.signals.models import Ensemble, TimeGrid
from src.signals.transforms import whiten

FREQUENCIES = (1.0, math.sqrt(2), 2.0)
MIXING = np.array([[1.0, 0.6, 0.3], [0.4, 1.0, 0.5], [0.2, 0.7, 1.0]])


def mixed_modes(duration=58 * math.pi, n_samples=5800):
    """Three detectors seeing cos(t), cos(sqrt(2) t) and cos(2t); 58 pi holds near-whole periods of all three."""
    grid = TimeGrid(0.0, duration / n_samples, n_samples)
    t = grid.times()
    sources = np.array([np.cos(w * t) for w in FREQUENCIES])
    return Ensemble(grid, MIXING @ sources), sources


def correlation(a, b):
    return abs(np.corrcoef(a, b)[0, 1])


class ExtractComponentTests(SimpleTestCase):
    def test_single_channel_cosine(self):
        grid = TimeGrid(0.0, 4 * math.pi / 400, 400)
        whitened = whiten(Ensemble(grid, np.cos(grid.times())))
        component = extract_component(whitened)
        np.testing.assert_allclose(component.direction, [1.0])
        self.assertLess(component.loss, 1e-6)

    def test_constraints_leave_one_direction(self):
        raw, _ = mixed_modes()
        whitened = whiten(raw)
        component = extract_component(whitened, orthogonal_to=[np.eye(3)[0], np.eye(3)[1]])
        np.testing.assert_allclose(np.abs(component.direction), [0.0, 0.0, 1.0], atol=1e-12)

    def test_too_many_constraints(self):
        raw, _ = mixed_modes()
        with self.assertRaises(DimensionMismatch):
            extract_component(whiten(raw), orthogonal_to=list(np.eye(3)))

    def test_deflated_components_recover_sources(self):
        raw, sources = mixed_modes()
        whitened = whiten(raw)
        config = SicaConfig()
        found = []
        unmixing = np.linalg.inv(MIXING)
        for index in range(3):
            component = extract_component(whitened, config=config, orthogonal_to=found, component_index=index)
            found.append(component.direction)
            with self.subTest(component=index):
                self.assertLess(component.loss, 1e-3)
                self.assertAlmostEqual(np.linalg.norm(component.direction), 1.0, delta=1e-12)
                best = max(range(3), key=lambda j: correlation(component.signal, sources[j]))
                self.assertGreater(correlation(component.signal, sources[best]), 0.99)
                row = component.unmixing_row / np.linalg.norm(component.unmixing_row)
                expected = unmixing[best] / np.linalg.norm(unmixing[best])
                self.assertGreater(abs(row @ expected), 0.99)

    def test_first_sample_is_non_negative(self):
        raw, _ = mixed_modes()
        component = extract_component(whiten(raw))
        self.assertGreaterEqual(component.signal[0], 0.0)

    def test_step_budget_exhaustion(self):
        raw, _ = mixed_modes()
        config = SicaConfig(newton_max_steps=1, newton_grad_tol=1e-14, restarts=2)
        with self.assertRaises(NoConvergence):
            extract_component(whiten(raw), config=config)


class SicaExtractTests(SimpleTestCase):
    def test_single_mode_settles_quickly(self):
        grid = TimeGrid(0.0, 0.02, 2000)
        raw = Ensemble(grid, 0.8 * np.cos(1.3 * grid.times() + 0.2) + 3.0)
        solution = sica_extract(raw, 1)
        (component,) = solution.components
        self.assertEqual(component.status, ComponentStatus.OK)
        self.assertAlmostEqual(component.frequency, 1.3, delta=1e-6)
        self.assertLessEqual(len(component.frequency_history), 3)
        self.assertEqual(len(component.rounds), len(component.frequency_history))
        self.assertEqual(component.rounds[0].window_length, 2000)
        self.assertEqual(component.rounds[-1].window_length, round(2 * 2 * math.pi / 1.3 / 0.02))

    def test_component_count_checked(self):
        raw, _ = mixed_modes(n_samples=600)
        with self.assertRaises(DimensionMismatch):
            sica_extract(raw, 4)
        with self.assertRaises(DimensionMismatch):
            sica_extract(raw, 0)

    def test_failed_components_keep_their_status(self):
        raw, _ = mixed_modes(n_samples=600)
        config = SicaConfig(newton_max_steps=1, newton_grad_tol=1e-14, restarts=1)
        solution = sica_extract(raw, 2, config)
        self.assertEqual(len(solution.components), 2)
        for component in solution.components:
            self.assertEqual(component.status, ComponentStatus.NO_CONVERGENCE)
            self.assertIn("restarts", component.message)


@tag("slow")
class SicaExtractMixtureTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.raw, cls.sources = mixed_modes()
        cls.solution = sica_extract(cls.raw, 3, SicaConfig(rng_seed=4))

    def test_frequencies_recovered_in_ascending_order(self):
        frequencies = self.solution.frequencies
        for found, expected in zip(frequencies, FREQUENCIES):
            self.assertAlmostEqual(found, expected, delta=0.02 * expected)

    def test_directions_orthonormal(self):
        directions = self.solution.directions()
        np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)
        gram = directions @ directions.T
        off_diagonal = gram - np.diag(np.diag(gram))
        self.assertLess(np.abs(off_diagonal).max(), 1e-8)

    def test_loss_recorded_per_round(self):
        for component in self.solution.components:
            self.assertEqual(len(component.loss_history), len(component.rounds))
            self.assertEqual(component.loss, component.loss_history[-1])

    def test_deterministic_for_fixed_seed(self):
        again = sica_extract(self.raw, 3, SicaConfig(rng_seed=4))
        np.testing.assert_array_equal(again.directions(), self.solution.directions())
        self.assertEqual(again.frequencies, self.solution.frequencies)
