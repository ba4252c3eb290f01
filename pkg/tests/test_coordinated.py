#!/usr/bin/env python3
"""Unit tests for the coordinated-transmission bounds."""

import math
import sys
import unittest
from pathlib import Path

import mpmath
import numpy as np

# Add parent directory to path to import adder_capacity
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from adder_capacity.channel import ChannelConfig, relative
from adder_capacity.config import Mode, Regime, Side
from adder_capacity.coordinated import (
    coord_large_gamma_asymptote, coord_lower_asymptotic, coord_lower_finite,
    coord_upper_asymptotic, coord_upper_finite,
)
from adder_capacity.errors import DomainError


def poisson_entropy_oracle(gamma: float) -> float:
    """coord_lower_asymptotic in extended precision."""
    mpmath.mp.dps = 30
    g = mpmath.mpf(gamma)
    total = mpmath.mpf(0)
    for i in range(int(4 * gamma) + 200):
        weight = mpmath.exp(-g) * g ** i / mpmath.factorial(i)
        total += weight * mpmath.log(mpmath.factorial(i), 2)
    return float(total - g * (mpmath.log(g, 2) - mpmath.log(mpmath.e, 2)))


class TestCoordUpper(unittest.TestCase):
    """Tests for the composition-counting upper bound."""

    def test_two_by_two(self):
        bound = coord_upper_finite(ChannelConfig(Q=2, S=2))
        self.assertAlmostEqual(bound.bits, math.log2(3), places=14)
        self.assertEqual((bound.side, bound.mode, bound.regime), (Side.upper, Mode.coordinated, Regime.finite))

    def test_single_frequency_is_zero(self):
        self.assertEqual(coord_upper_finite(ChannelConfig(Q=1, S=5)).bits, 0.0)

    def test_asymptotic_at_unit_load(self):
        self.assertEqual(coord_upper_asymptotic(1.0).bits, 2.0)

    def test_finite_approaches_asymptotic(self):
        # log2 C(2Q-1, Q)/Q = 2 - O(log Q / Q)
        coarse = relative(coord_upper_finite(ChannelConfig(Q=500, S=500)), 500)
        fine = relative(coord_upper_finite(ChannelConfig(Q=2000, S=2000)), 2000)
        self.assertLess(abs(coarse - 2.0) / 2.0, 0.01)
        self.assertLess(abs(fine - 2.0) / 2.0, 0.005)
        self.assertLess(coarse, fine)

    def test_rejects_non_positive_load(self):
        for gamma in (0.0, -1.0):
            with self.assertRaises(DomainError):
                coord_upper_asymptotic(gamma)


class TestCoordLower(unittest.TestCase):
    """Tests for the uniform-input entropy lower bound."""

    def test_two_by_two(self):
        self.assertAlmostEqual(coord_lower_finite(ChannelConfig(Q=2, S=2)).bits, 1.5, places=12)

    def test_single_frequency_is_zero(self):
        self.assertAlmostEqual(coord_lower_finite(ChannelConfig(Q=1, S=7)).bits, 0.0, places=12)

    def test_single_user_is_log_q(self):
        self.assertAlmostEqual(coord_lower_finite(ChannelConfig(Q=8, S=1)).bits, 3.0, places=12)

    def test_lower_below_upper(self):
        for Q, S in ((2, 2), (3, 4), (10, 25), (400, 800)):
            cfg = ChannelConfig(Q=Q, S=S)
            self.assertLessEqual(coord_lower_finite(cfg).bits, coord_upper_finite(cfg).bits + 1e-9)

    def test_lower_below_upper_for_random_instances(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            cfg = ChannelConfig(Q=int(rng.integers(1, 201)), S=int(rng.integers(1, 401)))
            self.assertLessEqual(coord_lower_finite(cfg).bits, coord_upper_finite(cfg).bits + 1e-9, msg=str(cfg))

    def test_asymptotic_matches_mpmath(self):
        for gamma in (0.3, 1.7, 8.0):
            self.assertAlmostEqual(coord_lower_asymptotic(gamma).bits, poisson_entropy_oracle(gamma), delta=1e-10)

    def test_asymptotic_strictly_increasing(self):
        values = [coord_lower_asymptotic(0.1 + 0.25 * k).bits for k in range(40)]
        for a, b in zip(values, values[1:]):
            self.assertLess(a, b)

    def test_large_load_asymptote(self):
        gamma = 1000.0
        reference = 0.5 * math.log2(2 * math.pi * math.e * gamma)
        self.assertLess(abs(coord_lower_asymptotic(gamma).bits - reference) / reference, 0.01)

    def test_asymptote_reference_curve(self):
        self.assertAlmostEqual(coord_large_gamma_asymptote(10.0).bits,
                               0.5 * math.log2(2 * math.pi * math.e * 10.0), places=14)
        # clamped where 2 pi e gamma < 1
        self.assertEqual(coord_large_gamma_asymptote(0.01).bits, 0.0)

    def test_finite_converges_after_total_count_correction(self):
        Q = 400
        for gamma in (0.5, 1.0, 2.0):
            cfg = ChannelConfig(Q=Q, S=int(gamma * Q))
            corrected = (relative(coord_lower_finite(cfg), Q)
                         + 0.5 * math.log2(2 * math.pi * math.e * cfg.S) / Q)
            self.assertLess(abs(corrected - coord_lower_asymptotic(gamma).bits), 0.01)

    def test_finite_converges_at_large_q(self):
        Q = 2000
        per_subchannel = relative(coord_lower_finite(ChannelConfig(Q=Q, S=Q)), Q)
        self.assertLess(abs(per_subchannel - coord_lower_asymptotic(1.0).bits), 0.01)


if __name__ == '__main__':
    unittest.main()
