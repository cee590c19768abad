"""
Tests for entropy closed forms, exhaustive enumeration and Monte Carlo estimates
"""

import unittest
import itertools
import math
import os
from fractions import Fraction

import sys
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from jigsaw_lab.config.settings import ExperimentParams
from jigsaw_lab.core.batch import BatchEncoder
from jigsaw_lab.core.entropy import (
    EntropyMethod,
    closed_form_report,
    critical_q,
    entropy_gap_leading,
    exact_distributions,
    h_box_leading_bound,
    h_img_closed_form,
    mc_entropy_estimates,
    symmetry_class_probabilities,
)
from jigsaw_lab.core.errors import BudgetExceededError, OutOfRegimeError
from jigsaw_lab.core.model import EdgeColoring, ModelVariant, extract_bag, symmetry_order
from jigsaw_lab.core.solver import has_unique_edge_assembly

ROT = ModelVariant.ROTATIONS_ALLOWED
FIXED = ModelVariant.FIXED_ORIENTATION
LOG2_E = math.log2(math.e)


class TestClosedForms(unittest.TestCase):
    """Test entropy closed forms"""

    def test_h_img_examples(self):
        """Test image entropy values"""
        self.assertAlmostEqual(h_img_closed_form(1, 2, ROT), 2.375, places=12)
        self.assertAlmostEqual(h_img_closed_form(2, 2, ROT), 10.017578125, places=12)
        self.assertAlmostEqual(h_img_closed_form(2, 2, FIXED), 12.0, places=12)
        self.assertEqual(h_img_closed_form(3, 1, ROT), 0.0)
        self.assertEqual(h_img_closed_form(3, 1, FIXED), 0.0)

    def test_h_box_leading_bound(self):
        """Test leading bound on box entropy"""
        self.assertAlmostEqual(h_box_leading_bound(16, 16, ROT), 2048 - (2 - LOG2_E) * 256, places=9)
        self.assertAlmostEqual(h_box_leading_bound(16, 16, ROT), 1905.33, places=1)
        self.assertAlmostEqual(h_box_leading_bound(16, 16, FIXED), 2048 + LOG2_E * 256, places=9)
        self.assertAlmostEqual(h_box_leading_bound(16, 16, FIXED), 2417.33, places=1)
        with self.assertRaises(OutOfRegimeError):
            h_box_leading_bound(16, 2, ROT)
        with self.assertRaises(OutOfRegimeError):
            h_box_leading_bound(1, 5, ROT)

    def test_entropy_gap_leading(self):
        """Test leading entropy gap"""
        self.assertEqual(entropy_gap_leading(16, 4), 1024)
        self.assertEqual(entropy_gap_leading(7, 7), 0)
        self.assertAlmostEqual(entropy_gap_leading(9, 3), 81 * math.log2(9))
        with self.assertRaises(ValueError):
            entropy_gap_leading(4, 5)
        with self.assertRaises(ValueError):
            entropy_gap_leading(4, 1)

    def test_symmetry_class_probabilities(self):
        """Test symmetry class probabilities"""
        for n, q in ((1, 2), (1, 3), (2, 2)):
            probabilities = symmetry_class_probabilities(n, q)
            self.assertEqual(sum(probabilities.values()), 1)
            counts = {1: 0, 2: 0, 4: 0}
            for flat in itertools.product(range(q), repeat=2 * n * (n + 1)):
                counts[symmetry_order(EdgeColoring.from_flat(n, q, flat))] += 1
            total = q ** (2 * n * (n + 1))
            for s in (1, 2, 4):
                self.assertEqual(probabilities[s], Fraction(counts[s], total))

    def test_critical_q(self):
        """Test critical color count"""
        self.assertAlmostEqual(critical_q(10, ROT), 20 / math.sqrt(math.e))
        self.assertAlmostEqual(critical_q(10, FIXED), 10 / math.sqrt(math.e))

    def test_closed_form_report(self):
        """Test closed form report"""
        report = closed_form_report(16, 4)
        self.assertIs(report.method, EntropyMethod.CLOSED_FORM)
        self.assertEqual(report.gap, 1024)
        self.assertIsNone(report.h_box_leading_bound)
        self.assertAlmostEqual(report.beta, 0.5)

        report = closed_form_report(16, 16)
        self.assertEqual(report.gap, 0)
        self.assertAlmostEqual(report.h_box_leading_bound, 2048 - (2 - LOG2_E) * 256, places=9)
        self.assertIsNone(closed_form_report(1, 2).beta)

        record = report.to_dict()
        self.assertEqual(record["schema_version"], 1)
        self.assertEqual(record["method"], "ClosedForm")
        self.assertIsNone(record["h_box"])


class TestExactDistributions(unittest.TestCase):
    """Test exhaustive enumeration of colorings"""

    def test_closed_form_exactness(self):
        """Test exact entropies match the closed forms"""
        for n, q in ((1, 2), (1, 3), (2, 2), (2, 3)):
            report = exact_distributions(n, q, ROT)
            self.assertAlmostEqual(report.h_img, h_img_closed_form(n, q, ROT), delta=1e-9)
        self.assertAlmostEqual(exact_distributions(1, 2).h_img, 2.375, delta=1e-9)
        self.assertAlmostEqual(exact_distributions(2, 2).h_img, 10.017578125, delta=1e-9)

    def test_fixed_orientation_exactness(self):
        """Test fixed-orientation entropies"""
        report = exact_distributions(2, 2, FIXED)
        self.assertAlmostEqual(report.h_img, 12.0, delta=1e-9)
        self.assertAlmostEqual(report.h_img, h_img_closed_form(2, 2, FIXED), delta=1e-9)

    def test_information_inequalities(self):
        """Test entropy inequalities"""
        for q in (2, 3):
            report = exact_distributions(2, q, ROT)
            self.assertGreater(report.h_box_subadditive - report.h_box, 1e-6)
            self.assertGreater(report.h_img - report.h_box, 1e-6)
            self.assertGreaterEqual(report.h_box, 0.0)
            self.assertLessEqual(report.p_unique_edge, 1.0)

    def test_single_cell_degeneracy(self):
        """Test one-cell boards"""
        for q in (2, 3, 4):
            report = exact_distributions(1, q, ROT)
            self.assertAlmostEqual(report.h_box, report.h_img, delta=1e-9)
            self.assertEqual(report.p_unique_edge, 1.0)

    def test_monotone_in_q(self):
        """Test entropies grow with q"""
        values = [exact_distributions(2, q).h_img for q in (2, 3)]
        self.assertLess(values[0], values[1])
        values = [exact_distributions(1, q).h_img for q in (2, 3, 4)]
        self.assertTrue(all(a < b for a, b in zip(values, values[1:])))

    def test_doubling_colors_never_lowers_box_entropy(self):
        """Test box entropy under doubled palettes"""
        h1 = exact_distributions(2, 1).h_box
        h2 = exact_distributions(2, 2).h_box
        h4 = exact_distributions(2, 4).h_box
        self.assertLessEqual(h1, h2)
        self.assertLessEqual(h2, h4)

    def test_unique_probability_matches_solver(self):
        """Test unique-box probability against the solver"""
        n, q = 2, 2
        unique = 0
        verdicts = {}
        for flat in itertools.product(range(q), repeat=12):
            c = EdgeColoring.from_flat(n, q, flat)
            bag = extract_bag(c, ROT)
            if bag not in verdicts:
                verdicts[bag] = has_unique_edge_assembly(c, ROT)
            unique += verdicts[bag]
        report = exact_distributions(n, q, ROT)
        self.assertAlmostEqual(report.p_unique_edge, unique / 4096, delta=1e-12)

    def test_multiplicity_table(self):
        """Test multiplicity histogram"""
        report = exact_distributions(2, 2)
        self.assertEqual(len(report.multiplicities), 6)
        for entry in report.multiplicities:
            self.assertAlmostEqual(entry["mean"], entry["expected"], delta=1e-12)

    def test_chunked_enumeration_covers_every_coloring(self):
        """Test chunks cover each coloring once"""
        encoder = BatchEncoder(1, 2, ROT)
        batches = list(encoder.iter_chunks(5))
        self.assertEqual([len(batch) for batch in batches], [5, 5, 5, 1])
        rows = {tuple(int(v) for v in row) for batch in batches for row in batch}
        self.assertEqual(rows, set(itertools.product(range(2), repeat=encoder.edges)))

    def test_budget(self):
        """Test enumeration budget"""
        with self.assertRaises(BudgetExceededError):
            exact_distributions(3, 3)


class TestMonteCarlo(unittest.TestCase):
    """Test Monte Carlo entropy estimates"""

    def test_matches_exact_subadditive_entropy(self):
        """Test estimates against exact values"""
        exact = exact_distributions(2, 2, ROT)
        estimate = mc_entropy_estimates(ExperimentParams(2, 2, "rot", trials=10 ** 5, seed=3))
        self.assertIs(estimate.method, EntropyMethod.MONTE_CARLO)
        self.assertLess(abs(estimate.h_box_subadditive - exact.h_box_subadditive),
                        3 * estimate.h_box_subadditive_stderr)
        self.assertLess(abs(estimate.duplicate_probability - exact.duplicate_probability),
                        3 * estimate.duplicate_probability_stderr)

    def test_single_color_always_duplicates(self):
        """Test single-color boards"""
        report = mc_entropy_estimates(ExperimentParams(2, 1, "rot", trials=100, seed=0))
        self.assertEqual(report.duplicate_probability, 1.0)
        self.assertEqual(report.h_box_subadditive, 0.0)

    def test_expected_multiplicity_law(self):
        """Test mean multiplicity"""
        report = mc_entropy_estimates(ExperimentParams(4, 2, "rot", trials=10 ** 4, seed=11))
        self.assertEqual(len(report.multiplicities), 6)
        blank = next(e for e in report.multiplicities if e["type"] == [0, 0, 0, 0])
        self.assertEqual(blank["expected"], 1.0)
        self.assertLess(abs(blank["mean"] - 1.0), 3 * blank["stderr"])
        for entry in report.multiplicities:
            self.assertEqual(entry["expected"], entry["orbit"] * 16 / 16)
            self.assertLess(abs(entry["mean"] - entry["expected"]), 4 * entry["stderr"])

    def test_determinism(self):
        """Test same seed gives same estimate"""
        params = ExperimentParams(3, 2, "fixed", trials=500, seed=9)
        self.assertEqual(mc_entropy_estimates(params).to_dict(), mc_entropy_estimates(params).to_dict())

    def test_minimum_trials(self):
        """Test trial count validation"""
        with self.assertRaises(ValueError):
            mc_entropy_estimates(ExperimentParams(2, 2, trials=99))


if __name__ == "__main__":
    unittest.main(verbosity=2)
