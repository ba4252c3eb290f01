#!/usr/bin/env python3
"""Tests for the adder-capacity command line: parsing, output and exit codes."""

import io
import json
import math
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest.mock import patch

# Add parent directory to path to import adder_capacity
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from adder_capacity import __main__ as entry
from adder_capacity.cli import main
from adder_capacity.cli.parsers import create_parser
from adder_capacity.cache import get_cache_manager
from adder_capacity.config import INTERNAL_ERROR_EXIT_CODE
from adder_capacity.uncoordinated import find_gamma_star


def run_cli(*argv):
    """Run the CLI; return (exit code, stdout, stderr)."""
    stdout, stderr = io.StringIO(), io.StringIO()
    code = 0
    with redirect_stdout(stdout), redirect_stderr(stderr):
        try:
            main(list(argv))
        except SystemExit as e:
            code = e.code if isinstance(e.code, int) else 1
    return code, stdout.getvalue(), stderr.getvalue()


class CliTestCase(unittest.TestCase):
    """Base class keeping handlers away from the user's log directory."""

    def setUp(self):
        patcher = patch('adder_capacity.cli.handlers.logging_main')
        patcher.start()
        self.addCleanup(patcher.stop)


# ============================================================================
# Parser
# ============================================================================

class TestParser(unittest.TestCase):
    """Tests for create_parser()."""

    def test_defaults(self):
        args = create_parser().parse_args(['simulate', '--Q', '3', '--S', '4'])
        self.assertEqual((args.samples, args.seed, args.streams), (1000000, 0, 1))
        self.assertEqual((args.quantity, args.estimator, args.dist), ('mi', 'plug-in', 'uniform'))
        self.assertIsNone(args.format)

    def test_grid_defaults(self):
        args = create_parser().parse_args(['figure', '2'])
        self.assertEqual((args.gamma_min, args.gamma_max, args.gamma_step), (0.1, 10.0, 0.05))

    def test_no_command_exits_2(self):
        code, stdout, _ = run_cli()
        self.assertEqual(code, 2)
        self.assertIn('bounds', stdout)

    def test_bad_choice_exits_2(self):
        self.assertEqual(run_cli('figure', '4')[0], 2)
        self.assertEqual(run_cli('bounds', 'disjunctive')[0], 2)
        self.assertEqual(run_cli('finite', '--Q', '3')[0], 2)


# ============================================================================
# Curve commands
# ============================================================================

class TestCurveCommands(CliTestCase):
    """Tests for bounds and figure."""

    def test_bounds_coordinated_csv(self):
        code, stdout, _ = run_cli('bounds', 'coordinated', '--gamma-min', '0.5', '--gamma-max', '1.5',
                                  '--gamma-step', '0.5')
        self.assertEqual(code, 0)
        lines = stdout.splitlines()
        self.assertEqual(lines[0], 'gamma,coord-lower,coord-upper,coord-asymptote')
        self.assertEqual(len(lines), 4)
        self.assertEqual(lines[2].split(',')[:3:2], ['1.00000', '2.00000'])

    def test_bounds_uncoordinated_json(self):
        code, stdout, _ = run_cli('bounds', 'uncoordinated', '--gamma-min', '5', '--gamma-max', '6',
                                  '--gamma-step', '1', '-f', 'json')
        self.assertEqual(code, 0)
        rows = json.loads(stdout)
        self.assertEqual([row['gamma'] for row in rows], [5.0, 6.0])
        for row in rows:
            self.assertAlmostEqual(row['uc-upper'], 1.0 / math.log(2), places=10)
            self.assertLessEqual(row['uc-lower'], row['uc-upper'])

    def test_figure_two_emits_uniform_curve_only(self):
        code, stdout, _ = run_cli('figure', '2', '--gamma-min', '1', '--gamma-max', '2', '--gamma-step', '0.5')
        self.assertEqual(code, 0)
        self.assertEqual(stdout.splitlines()[0], 'gamma,uc-unif')

    def test_invalid_grid_exits_2(self):
        code, _, stderr = run_cli('bounds', 'coordinated', '--gamma-min', '0')
        self.assertEqual(code, 2)
        self.assertIn('Error executing bounds command', stderr)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'fig1.csv')
            code, stdout, stderr = run_cli('figure', '1', '--gamma-min', '1', '--gamma-max', '2',
                                           '--gamma-step', '1', '--out', path)
            self.assertEqual(code, 0)
            self.assertEqual(stdout, '')
            self.assertIn(path, stderr)
            with open(path) as f:
                self.assertEqual(f.readline().strip(), 'gamma,coord-lower,coord-upper')


# ============================================================================
# Instance commands
# ============================================================================

class TestFiniteCommand(CliTestCase):
    """Tests for finite."""

    def test_two_by_two(self):
        code, stdout, _ = run_cli('finite', '--Q', '2', '--S', '2')
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertEqual((report['Q'], report['S'], report['gamma'], report['dist']), (2, 2, 1.0, 'uniform'))
        self.assertAlmostEqual(report['coord_upper'], math.log2(3), places=10)
        self.assertAlmostEqual(report['coord_lower'], 1.5, places=10)
        self.assertAlmostEqual(report['uc_sum_rate'], 1.0, places=10)
        self.assertAlmostEqual(report['per_subchannel']['coord_lower'], 0.75, places=10)

    def test_distribution_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'p.txt')
            with open(path, 'w') as f:
                f.write("# skewed\n0.25\n\n0.75\n")
            code, stdout, _ = run_cli('finite', '--Q', '2', '--S', '1', '--dist', path)
            self.assertEqual(code, 0)
            expected = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
            self.assertAlmostEqual(json.loads(stdout)['uc_sum_rate'], expected, places=10)

            code, _, stderr = run_cli('finite', '--Q', '3', '--S', '1', '--dist', path)
            self.assertEqual(code, 3)
            self.assertIn('length equals Q violated', stderr)

    def test_undecodable_distribution_file_exits_3(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'p.bin')
            with open(path, 'wb') as f:
                f.write(b'\xff\xfe0.5\n')
            code, _, stderr = run_cli('finite', '--Q', '2', '--S', '2', '--dist', path)
        self.assertEqual(code, 3)
        self.assertIn('cannot read distribution file', stderr)

    def test_distorted(self):
        code, stdout, _ = run_cli('finite', '--Q', '4', '--S', '8', '--dist', 'distorted')
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertGreaterEqual(report['uc_sum_rate'], report['uc_lower'] - 1e-9)

    def test_config_tolerance_reaches_distorted_law(self):
        get_cache_manager().clear('gamma_star')
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'settings.yaml')
            with open(path, 'w') as f:
                f.write("gamma_star:\n  tol: 0.00123\n")
            with patch('adder_capacity.uncoordinated.find_gamma_star', wraps=find_gamma_star) as search:
                code, _, _ = run_cli('finite', '--Q', '4', '--S', '8', '--dist', 'distorted', '--config', path)
        self.assertEqual(code, 0)
        self.assertEqual({c.args[0] for c in search.call_args_list}, {0.00123})

    def test_invalid_instance_exits_3(self):
        self.assertEqual(run_cli('finite', '--Q', '0', '--S', '2')[0], 3)

    def test_bad_config_exits_3(self):
        code, _, stderr = run_cli('finite', '--Q', '2', '--S', '2', '--config', '/nonexistent/settings.yaml')
        self.assertEqual(code, 3)
        self.assertIn('not found', stderr)


class TestGammaStarCommand(CliTestCase):
    """Tests for gamma-star."""

    def test_json(self):
        code, stdout, _ = run_cli('gamma-star', '--tol', '1e-6')
        self.assertEqual(code, 0)
        result = json.loads(stdout)
        self.assertTrue(1.3372 <= result['gamma_star'] <= 1.3392)
        self.assertTrue(0.8361 <= result['c_star'] <= 0.8381)
        self.assertLessEqual(result['bracket_width'], 1e-6)

    def test_non_positive_tolerance_exits_3(self):
        self.assertEqual(run_cli('gamma-star', '--tol', '0')[0], 3)


class TestSimulateCommand(CliTestCase):
    """Tests for simulate."""

    def test_mutual_information(self):
        code, stdout, _ = run_cli('simulate', '--Q', '2', '--S', '2', '--samples', '20000', '--seed', '3',
                                  '--streams', '2')
        self.assertEqual(code, 0)
        result = json.loads(stdout)
        self.assertEqual((result['quantity'], result['estimator'], result['samples']), ('mi', 'pointwise-mi', 20000))
        self.assertAlmostEqual(result['reference'], 0.5, places=10)
        self.assertLess(abs(result['z_score']), 5.0)

    def test_entropy(self):
        code, stdout, _ = run_cli('simulate', '--Q', '3', '--S', '2', '--samples', '20000', '--quantity', 'entropy',
                                  '--estimator', 'miller-madow')
        self.assertEqual(code, 0)
        result = json.loads(stdout)
        self.assertEqual(result['estimator'], 'miller-madow')
        self.assertLess(abs(result['estimate'] - result['reference']), 5 * result['std_error'])

    def test_same_seed_same_output(self):
        argv = ('simulate', '--Q', '3', '--S', '5', '--samples', '5000', '--seed', '17', '--streams', '3')
        self.assertEqual(run_cli(*argv)[1], run_cli(*argv)[1])

    def test_entropy_with_many_frequencies(self):
        code, stdout, _ = run_cli('simulate', '--Q', '1200', '--S', '1', '--samples', '5000', '--seed', '2',
                                  '--quantity', 'entropy')
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(stdout)['reference'], math.log2(1200), places=8)

    def test_refusals_exit_5(self):
        self.assertEqual(run_cli('simulate', '--Q', '20', '--S', '10', '--samples', '10',
                                 '--quantity', 'entropy')[0], 5)
        self.assertEqual(run_cli('simulate', '--Q', '2', '--S', '2', '--samples', '0')[0], 5)


class TestVerifyCommand(CliTestCase):
    """Tests for verify."""

    def test_lemma2_passes(self):
        code, stdout, _ = run_cli('verify', 'lemma2')
        self.assertEqual(code, 0)
        self.assertIn('p=1 N=100', stdout)
        self.assertIn('passed', stdout)

    def test_failure_exits_1(self):
        failing = [{'suite': 'lemma1', 'case': 'forced', 'passed': False, 'detail': 'x'}]
        with patch('adder_capacity.cli.handlers.run_suite', return_value=failing):
            code, stdout, stderr = run_cli('verify', 'lemma1', '-f', 'json')
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(stdout), failing)
        self.assertIn('1 of 1 lemma1 case(s) failed', stderr)


# ============================================================================
# Console script entry point
# ============================================================================

class TestEntryPoint(unittest.TestCase):
    """Tests for adder_capacity.__main__.main()."""

    @patch('adder_capacity.__main__.cli_main', side_effect=KeyboardInterrupt)
    def test_keyboard_interrupt_exits_0(self, _):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                entry.main()
        self.assertEqual(ctx.exception.code, 0)

    @patch('adder_capacity.__main__.cli_main', side_effect=SystemExit(4))
    def test_system_exit_passes_through(self, _):
        with self.assertRaises(SystemExit) as ctx:
            entry.main()
        self.assertEqual(ctx.exception.code, 4)

    @patch('adder_capacity.__main__.cli_main', side_effect=RuntimeError('boom'))
    def test_unexpected_error_uses_internal_error_code(self, _):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                entry.main()
        self.assertEqual(ctx.exception.code, INTERNAL_ERROR_EXIT_CODE)


if __name__ == '__main__':
    unittest.main()
