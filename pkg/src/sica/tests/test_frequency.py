import math

import numpy as np
from django.test import SimpleTestCase

from src.core.exceptions import NoOscillation, SignalTooShort
from src.sica.frequency import canonical_cosine, estimate_frequency, spectral_peak
from src.signals.models import TimeGrid


class EstimateFrequencyTests(SimpleTestCase):
    grid = TimeGrid(0.0, 4 * math.pi / 400, 400)

    def test_recovers_frequency_and_phase(self):
        signal = math.sqrt(2) * np.cos(1.3 * self.grid.times() + 0.4)
        omega, phase = estimate_frequency(signal, self.grid)
        self.assertAlmostEqual(omega, 1.3, delta=1e-6)
        self.assertAlmostEqual(phase, 0.4, delta=1e-5)

    def test_phase_reported_in_first_turn(self):
        signal = -np.cos(2.0 * self.grid.times())
        omega, phase = estimate_frequency(signal, self.grid)
        self.assertAlmostEqual(omega, 2.0, delta=1e-6)
        self.assertAlmostEqual(phase, math.pi, delta=1e-5)

    def test_constant_signal_has_no_oscillation(self):
        with self.assertRaises(NoOscillation):
            estimate_frequency(np.full(400, 3.0), self.grid)

    def test_short_or_mismatched_signal(self):
        with self.assertRaises(SignalTooShort):
            estimate_frequency(np.ones(5), TimeGrid(0.0, 0.1, 5))
        with self.assertRaises(SignalTooShort):
            estimate_frequency(np.ones(300), self.grid)

    def test_noisy_cosine_within_one_percent_of_truth(self):
        t = self.grid.times()
        passed = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            signal = math.sqrt(2) * np.cos(1.0 * t + 0.3) + rng.uniform(-0.1, 0.1, t.size)
            omega, _ = estimate_frequency(signal, self.grid)
            passed += abs(omega - 1.0) < 1e-2
        self.assertGreaterEqual(passed, 95)


class SpectralPeakTests(SimpleTestCase):
    def test_peak_near_true_frequency(self):
        dt = 0.05
        t = np.arange(2000) * dt
        omega = spectral_peak(np.cos(2.5 * t), dt)
        self.assertAlmostEqual(omega, 2.5, delta=2 * math.pi / (8 * 2000 * dt))

    def test_constant_signal_peaks_at_zero(self):
        with self.assertRaises(NoOscillation):
            spectral_peak(np.full(64, 1.0), 0.1)


class CanonicalCosineTests(SimpleTestCase):
    def test_negative_amplitude_and_frequency(self):
        amplitude, omega, phase = canonical_cosine(-2.0, -1.5, 0.5)
        self.assertEqual((amplitude, omega), (2.0, 1.5))
        self.assertAlmostEqual(phase, (-0.5 + math.pi) % (2 * math.pi))
