#!/usr/bin/env python3
"""Unit tests for the numerically stable primitives in numerics.py."""

import math
import sys
import unittest
from pathlib import Path

import mpmath
import numpy as np

# Add parent directory to path to import adder_capacity
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from adder_capacity.errors import ConfigError, DomainError, SeriesConvergenceError
from adder_capacity.numerics import (
    CompensatedSum, SeriesControl, binomial_logpmf_vector, binomial_pmf_log, check_load,
    log_binomial, log_factorial, log_factorial_vector, poisson_pmf_log, poisson_weighted_sum,
    truncated_series_sum,
)


class TestLogFactorial(unittest.TestCase):
    """Tests for log_factorial() and log_factorial_vector()."""

    def test_small_values_are_exact(self):
        self.assertEqual(log_factorial(0), 0.0)
        self.assertEqual(log_factorial(1), 0.0)
        self.assertEqual(log_factorial(5), math.log(120))
        self.assertEqual(log_factorial(20), math.log(math.factorial(20)))

    def test_large_values_match_mpmath(self):
        mpmath.mp.dps = 30
        for n in (21, 100, 1000, 123456):
            expected = float(mpmath.loggamma(n + 1))
            self.assertAlmostEqual(log_factorial(n) / expected, 1.0, delta=1e-14)

    def test_monotone_nondecreasing(self):
        values = [log_factorial(n) for n in range(3000)]
        for n in range(1, len(values)):
            self.assertGreaterEqual(values[n], values[n - 1], msg=f"n={n}")
        for n in (10 ** 4, 10 ** 5, 10 ** 6):
            self.assertGreater(log_factorial(n + 1), log_factorial(n))

    def test_vector_matches_scalar(self):
        values = log_factorial_vector(60)
        self.assertEqual(values.shape, (61,))
        for n in range(61):
            self.assertAlmostEqual(values[n], log_factorial(n), delta=1e-12 * max(1.0, values[n]))

    def test_vector_of_zero(self):
        np.testing.assert_array_equal(log_factorial_vector(0), np.array([0.0]))

    def test_rejects_negative_and_non_integer(self):
        with self.assertRaises(DomainError):
            log_factorial(-1)
        with self.assertRaises(DomainError):
            log_factorial(2.5)


class TestLogBinomial(unittest.TestCase):
    """Tests for log_binomial()."""

    def test_small_exact(self):
        self.assertAlmostEqual(log_binomial(5, 2), math.log(10), places=15)
        self.assertEqual(log_binomial(7, 0), 0.0)
        self.assertEqual(log_binomial(7, 7), 0.0)

    def test_symmetry_is_exact(self):
        for n, k in ((100, 30), (1001, 17), (40, 11)):
            self.assertEqual(log_binomial(n, k), log_binomial(n, n - k))

    def test_large_matches_mpmath(self):
        mpmath.mp.dps = 40
        expected = float(mpmath.log(mpmath.binomial(1000, 400)))
        self.assertAlmostEqual(log_binomial(1000, 400) / expected, 1.0, delta=1e-12)

    def test_k_greater_than_n_raises(self):
        with self.assertRaises(DomainError):
            log_binomial(3, 4)


class TestPmfs(unittest.TestCase):
    """Tests for binomial and Poisson log-pmfs."""

    def test_binomial_edge_probabilities(self):
        self.assertEqual(binomial_pmf_log(5, 0, 0.0), 0.0)
        self.assertEqual(binomial_pmf_log(5, 1, 0.0), -math.inf)
        self.assertEqual(binomial_pmf_log(5, 5, 1.0), 0.0)
        self.assertEqual(binomial_pmf_log(5, 4, 1.0), -math.inf)

    def test_binomial_value(self):
        expected = math.log(10 * 0.3 ** 2 * 0.7 ** 3)
        self.assertAlmostEqual(binomial_pmf_log(5, 2, 0.3), expected, places=13)

    def test_binomial_vector_sums_to_one(self):
        for n, p in ((50, 0.3), (400, 1.0 / 400), (1, 0.5), (0, 0.7)):
            total = math.fsum(np.exp(binomial_logpmf_vector(n, p)))
            self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_binomial_pmf_normalizes_for_random_cases(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(0, 501))
            p = float(rng.uniform(0.0, 1.0))
            total = math.fsum(math.exp(binomial_pmf_log(n, i, p)) for i in range(n + 1))
            self.assertAlmostEqual(total, 1.0, delta=1e-12, msg=f"n={n}, p={p!r}")

    def test_binomial_vector_matches_scalar(self):
        vector = binomial_logpmf_vector(12, 0.35)
        for i in range(13):
            self.assertAlmostEqual(vector[i], binomial_pmf_log(12, i, 0.35), places=12)

    def test_binomial_rejects_bad_probability(self):
        with self.assertRaises(DomainError):
            binomial_pmf_log(3, 1, 1.5)
        with self.assertRaises(DomainError):
            binomial_logpmf_vector(3, -0.1)

    def test_poisson_value(self):
        self.assertAlmostEqual(poisson_pmf_log(2.0, 3), 3 * math.log(2.0) - 2.0 - math.log(6), places=14)

    def test_check_load(self):
        self.assertEqual(check_load(1), 1.0)
        for bad in (0, -1.0, math.inf, math.nan, "x"):
            with self.assertRaises(DomainError):
                check_load(bad)


class TestCompensatedSum(unittest.TestCase):
    """Tests for the running Neumaier sum."""

    def test_recovers_lost_low_order_bits(self):
        acc = CompensatedSum()
        for value in (1e16, 1.0, -1e16):
            acc.add(value)
        self.assertEqual(acc.value, 1.0)

    def test_empty_is_zero(self):
        self.assertEqual(CompensatedSum().value, 0.0)


class TestSeries(unittest.TestCase):
    """Tests for truncated_series_sum() and poisson_weighted_sum()."""

    def test_geometric_series(self):
        result = truncated_series_sum(lambda i: 0.5 ** i)
        self.assertAlmostEqual(result.value, 2.0, delta=1e-12)
        self.assertGreater(result.terms, 40)

    def test_respects_min_index(self):
        result = truncated_series_sum(lambda i: 0.0 if i < 30 else 0.5 ** (i - 30), min_index=40)
        self.assertAlmostEqual(result.value, 2.0, delta=1e-12)

    def test_prefix_reordering_is_stable(self):
        rng = np.random.default_rng(8)
        series = {
            'geometric': (lambda i: 0.5 ** i, 2.0),
            'alternating': (lambda i: (-0.9) ** i, 1.0 / 1.9),
            'poisson': (lambda i: math.exp(poisson_pmf_log(3.0, i)), 1.0),
        }
        for name, (term, expected) in series.items():
            reference = truncated_series_sum(term).value
            self.assertAlmostEqual(reference, expected, delta=1e-12, msg=name)
            for _ in range(20):
                order = rng.permutation(10)
                shuffled = truncated_series_sum(lambda i: term(int(order[i])) if i < 10 else term(i))
                self.assertAlmostEqual(shuffled.value, reference, delta=1e-12, msg=name)

    def test_divergent_series_raises(self):
        with self.assertRaises(SeriesConvergenceError):
            truncated_series_sum(lambda i: 1.0, SeriesControl(max_terms=100))

    def test_non_finite_term_raises(self):
        with self.assertRaises(SeriesConvergenceError):
            truncated_series_sum(lambda i: math.inf)

    def test_poisson_moments(self):
        for gamma in (0.1, 3.7, 50.0):
            self.assertAlmostEqual(poisson_weighted_sum(gamma, lambda i: 1.0).value, 1.0, delta=1e-12)
            self.assertAlmostEqual(poisson_weighted_sum(gamma, float).value / gamma, 1.0, delta=1e-11)

    def test_poisson_stops_past_the_mode(self):
        gamma = 200.0
        result = poisson_weighted_sum(gamma, lambda i: 1.0)
        self.assertGreater(result.terms, 2 * gamma + 50)

    def test_series_control_validation(self):
        with self.assertRaises(ConfigError):
            SeriesControl(rel_tol=0.0)
        with self.assertRaises(ConfigError):
            SeriesControl(max_terms=0)
        with self.assertRaises(ConfigError):
            SeriesControl(stability_window=0)

    def test_series_control_from_config(self):
        ctrl = SeriesControl.from_config({'series': {'rel_tol': 1e-10, 'max_terms': 500, 'stability_window': 3}})
        self.assertEqual(ctrl, SeriesControl(rel_tol=1e-10, max_terms=500, stability_window=3))
        self.assertEqual(SeriesControl.from_config(None), SeriesControl())


if __name__ == '__main__':
    unittest.main()
