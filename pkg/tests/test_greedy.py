"""
Tests for greedy random assembly and the tree-size estimator
"""

import unittest
import json
import math
import os
from unittest import mock

import sys
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from jigsaw_lab.core.greedy import GreedyOutcome, estimate_raw_count, greedy_fill, solution_scale_log2
from jigsaw_lab.core.model import EdgeColoring, ModelVariant, PieceBag, canonicalize_piece, extract_bag
from jigsaw_lab.core.solver import AssemblyState, count_raw_assemblies
from jigsaw_lab.generators.puzzle_generator import generate_puzzle
from jigsaw_lab.utils.helpers import make_rng

ROT = ModelVariant.ROTATIONS_ALLOWED
FIXED = ModelVariant.FIXED_ORIENTATION


class TestGreedyFill(unittest.TestCase):
    """Test greedy random assembly"""

    def test_monochromatic(self):
        """Test single-color bag"""
        outcome = greedy_fill(extract_bag(EdgeColoring.monochromatic(2, q=2), ROT), seed=0)
        self.assertTrue(outcome.success)
        self.assertEqual(outcome.estimate, 1)
        self.assertEqual(outcome.path_length, 4)

    def test_single_piece(self):
        """Test one-cell bag"""
        outcome = greedy_fill(PieceBag.from_counts(1, 4, ROT, {(0, 1, 2, 3): 1}), seed=5)
        self.assertTrue(outcome.success)
        self.assertEqual(outcome.estimate, 4)

    def test_outcome_invariants(self):
        """Test success, estimate and path length agree"""
        rng = make_rng(1)
        dead_ends = 0
        for _ in range(30):
            bag = extract_bag(generate_puzzle(3, 2, rng), ROT)
            for _ in range(20):
                outcome = greedy_fill(bag, rng)
                self.assertEqual(outcome.success, outcome.path_length == 9)
                self.assertEqual(outcome.estimate > 0, outcome.success)
                if not outcome.success:
                    dead_ends += 1
                    self.assertEqual(outcome.estimate, 0)
        self.assertGreater(dead_ends, 0)

    def test_first_branch_set(self):
        """Test first estimate factor equals the solver branch count"""
        bag = extract_bag(generate_puzzle(2, 3, 4), ROT)
        branches = AssemblyState(bag).branches(0)
        # every rotation of every type fits the empty corner
        self.assertEqual(len(branches), sum(canonicalize_piece(p).orbit for p, _ in bag.items))
        self.assertEqual(len(set(oriented for oriented, _ in branches)), len(branches))


class TestEstimator(unittest.TestCase):
    """Test the raw count estimator"""

    def assert_unbiased(self, bag, runs, seed):
        """Estimator mean within four standard errors of the exact count"""
        summary = estimate_raw_count(bag, runs, seed=seed)
        exact = count_raw_assemblies(bag)
        self.assertTrue(exact.exact)
        self.assertLessEqual(abs(summary.mean - exact.value), 4 * summary.stderr,
                             f"mean {summary.mean} vs exact {exact.value}")

    def test_unbiased_small_boards(self):
        """Test estimator on small boards"""
        rng = make_rng(77)
        for i in range(20):
            self.assert_unbiased(extract_bag(generate_puzzle(2, 2, rng), ROT), 10 ** 4, seed=i)
        for i in range(5):
            self.assert_unbiased(extract_bag(generate_puzzle(3, 2, rng), ROT), 10 ** 4, seed=100 + i)

    def test_unbiased_fixed_orientation(self):
        """Test estimator with fixed orientation"""
        rng = make_rng(78)
        for i in range(5):
            self.assert_unbiased(extract_bag(generate_puzzle(2, 2, rng), FIXED), 5000, seed=i)

    def test_single_cell_is_exact(self):
        """Test one-cell bags give the exact count"""
        for edges in ((0, 0, 0, 0), (0, 1, 0, 1), (0, 1, 2, 3)):
            bag = PieceBag.from_counts(1, 4, ROT, {edges: 1})
            summary = estimate_raw_count(bag, 50, seed=3)
            self.assertEqual(summary.mean, count_raw_assemblies(bag).value)
            self.assertEqual(summary.stderr, 0.0)

    def test_monochromatic(self):
        """Test single-color bag"""
        summary = estimate_raw_count(extract_bag(EdgeColoring.monochromatic(3, q=2), ROT), 100)
        self.assertEqual(summary.success_rate, 1.0)
        self.assertEqual(summary.mean, 1.0)
        self.assertEqual(summary.log2_mean, 0.0)

    def test_determinism(self):
        """Test same seed gives same summary"""
        bag = extract_bag(generate_puzzle(3, 2, 6), ROT)
        first = estimate_raw_count(bag, 300, seed=42)
        second = estimate_raw_count(bag, 300, seed=42)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_estimates_beyond_float_range(self):
        """Test summaries of estimates above the float range"""
        outcomes = [GreedyOutcome(True, 2 ** 1100, 9), GreedyOutcome(True, 2 ** 1101, 9)]
        with mock.patch("jigsaw_lab.core.greedy.greedy_fill", side_effect=outcomes):
            summary = estimate_raw_count(extract_bag(EdgeColoring.monochromatic(3), ROT), 2)
        self.assertAlmostEqual(summary.log2_mean, 1099 + math.log2(3), places=9)
        self.assertAlmostEqual(summary.log2_stderr, 1099.0, places=9)
        self.assertTrue(math.isinf(summary.mean))
        self.assertTrue(math.isinf(summary.stderr))
        record = summary.to_dict()
        self.assertIsNone(record["mean"])
        self.assertIsNone(record["stderr"])
        json.dumps(record, allow_nan=False)

    def test_large_board_does_not_overflow(self):
        """Test estimator on a 24x24 board"""
        bag = extract_bag(generate_puzzle(24, 2, 16), ROT)
        summary = estimate_raw_count(bag, 2, seed=16)
        self.assertIsNotNone(summary.log2_mean)
        self.assertGreater(summary.log2_mean, 100)
        if math.isfinite(summary.mean):
            self.assertAlmostEqual(math.log2(summary.mean), summary.log2_mean, places=6)
        else:
            self.assertGreater(summary.log2_mean, 1023)
        json.dumps(summary.to_dict(), allow_nan=False)

    def test_rejects_zero_runs(self):
        """Test run count validation"""
        with self.assertRaises(ValueError):
            estimate_raw_count(extract_bag(EdgeColoring.monochromatic(2), ROT), 0)


class TestSolutionScale(unittest.TestCase):
    """Test solution count exponent"""

    def test_examples(self):
        """Test exponent values"""
        self.assertEqual(solution_scale_log2(4, 2), 32)
        self.assertEqual(solution_scale_log2(5, 5), 0)
        self.assertAlmostEqual(solution_scale_log2(9, 3), 81 * math.log2(9))
        with self.assertRaises(ValueError):
            solution_scale_log2(4, 1)
        with self.assertRaises(ValueError):
            solution_scale_log2(4, 5)


if __name__ == "__main__":
    unittest.main(verbosity=2)
