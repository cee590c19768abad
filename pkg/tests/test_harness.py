"""
Tests for seed derivation and phase-transition sweeps
"""

import unittest
import tempfile
import shutil
import json
import os
from pathlib import Path

import sys
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from jigsaw_lab.config.settings import Config, SweepConfig
from jigsaw_lab.core.sweep import SweepRunner, run_sweep, run_trial
from jigsaw_lab.utils.helpers import derive_seed


class TestDeriveSeed(unittest.TestCase):
    """Test per-trial seed derivation"""

    def test_stable_and_injective(self):
        """Test seeds are stable and distinct"""
        self.assertEqual(derive_seed(7, 2, 2, 0), derive_seed(7, 2, 2, 0))
        self.assertNotEqual(derive_seed(7, 2, 2, 0), derive_seed(7, 2, 2, 1))

        seeds = {derive_seed(m, n, q, t)
                 for m in range(3) for n in range(1, 5) for q in range(1, 5) for t in range(10)}
        self.assertEqual(len(seeds), 3 * 4 * 4 * 10)

    def test_packed_layout(self):
        """Test bit layout of derived seeds"""
        self.assertEqual(derive_seed(0, 0, 0, 5), 5)
        self.assertEqual(derive_seed(0, 0, 1, 0), 1 << 24)
        self.assertEqual(derive_seed(0, 1, 0, 0), 1 << 44)
        self.assertEqual(derive_seed(1, 0, 0, 0), 1 << 64)

    def test_out_of_range(self):
        """Test out-of-range fields"""
        with self.assertRaises(ValueError):
            derive_seed(0, 2, 2, 1 << 24)
        with self.assertRaises(ValueError):
            derive_seed(-1, 2, 2, 0)


class TestRunTrial(unittest.TestCase):
    """Test single sweep trials"""

    def task(self, n, q, model="rot", trial=0, count_solutions=False, record_timing=False):
        """Worker task tuple for one trial"""
        return (n, q, model, trial, derive_seed(0, n, q, trial), Config.CLASS_LIMIT,
                Config.NODE_BUDGET, Config.TRIAL_TIME_BUDGET, count_solutions, record_timing)

    def test_single_cell_always_unique(self):
        """Test one-cell boards"""
        for trial in range(10):
            record = run_trial(self.task(1, 3, trial=trial))
            self.assertTrue(record.unique_edge)
            self.assertTrue(record.unique_vertex)
            self.assertEqual(record.outcome, "ok")

    def test_single_color_board(self):
        """Test single-color boards"""
        record = run_trial(self.task(2, 1))
        self.assertTrue(record.unique_edge)
        self.assertFalse(record.unique_vertex)
        self.assertTrue(record.duplicates)
        self.assertEqual(record.raw_count, 1)

    def test_counting_mode(self):
        """Test full solution counting"""
        early = run_trial(self.task(3, 2, trial=4))
        full = run_trial(self.task(3, 2, trial=4, count_solutions=True))
        self.assertEqual(early.seed, full.seed)
        self.assertEqual(early.unique_edge, full.unique_edge)
        self.assertGreaterEqual(full.raw_count, early.raw_count)

    def test_timing_is_opt_in(self):
        """Test wall time is off by default"""
        self.assertIsNone(run_trial(self.task(2, 2)).wall_ms)
        self.assertIsNotNone(run_trial(self.task(2, 2, record_timing=True)).wall_ms)

    def test_budget_outcome(self):
        """Test budget exhaustion outcome"""
        task = (4, 2, "rot", 0, derive_seed(0, 4, 2, 0), Config.CLASS_LIMIT, 5, 10.0, True, False)
        record = run_trial(task)
        self.assertEqual(record.outcome, "budget")
        self.assertFalse(record.unique_edge)
        self.assertFalse(record.unique_vertex)
        self.assertGreaterEqual(record.distinct_classes, 1)


class TestSweep(unittest.TestCase):
    """Test phase-transition sweeps"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir)

    def config(self, name, **overrides):
        """Sweep config writing into the temp directory"""
        values = dict(n_values=[1, 2, 3], q_values=[1, 2, 3], trials=6, master_seed=5,
                      output=os.path.join(self.temp_dir, name))
        values.update(overrides)
        return SweepConfig(**values)

    def test_rows_sorted_and_consistent(self):
        """Test row order and verdict consistency"""
        result = run_sweep(self.config("a.csv"), jobs=1, progress=False)
        keys = [(r.n, r.q, r.trial) for r in result.records]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(len(keys), 9 * 6)
        for record in result.records:
            if record.unique_vertex:
                self.assertTrue(record.unique_edge)
            if record.duplicates and record.n >= 2:
                self.assertFalse(record.unique_vertex)
            self.assertGreaterEqual(record.distinct_classes, 1)
            if record.n == 1:
                self.assertTrue(record.unique_edge)

    def test_summary_matches_rows(self):
        """Test summary rates against rows"""
        result = run_sweep(self.config("b.csv"), jobs=1, progress=False)
        for cell in result.summary["cells"]:
            rows = [r for r in result.records if (r.n, r.q) == (cell["n"], cell["q"])]
            self.assertEqual(cell["trials"], len(rows))
            self.assertEqual(cell["p_unique_edge"], sum(r.unique_edge for r in rows) / len(rows))
            self.assertEqual(cell["p_unique_vertex"], sum(r.unique_vertex for r in rows) / len(rows))
            self.assertEqual(cell["p_duplicates"], sum(r.duplicates for r in rows) / len(rows))

        summary_cells = {(c["n"], c["q"]): c for c in result.summary["cells"]}
        self.assertEqual(summary_cells[(2, 1)]["p_unique_edge"], 1.0)
        self.assertEqual(summary_cells[(2, 1)]["p_unique_vertex"], 0.0)
        self.assertEqual(summary_cells[(2, 1)]["p_duplicates"], 1.0)
        self.assertIsNone(summary_cells[(1, 3)]["beta"])

        with open(result.summary_path, 'r') as f:
            on_disk = json.load(f)
        self.assertEqual(on_disk["schema_version"], Config.SCHEMA_VERSION)
        self.assertEqual(len(on_disk["cells"]), 9)

    def test_identical_files_across_job_counts(self):
        """Test output does not depend on worker count"""
        serial = run_sweep(self.config("serial.csv"), jobs=1, progress=False)
        parallel = run_sweep(self.config("parallel.csv"), jobs=3, progress=False)
        self.assertEqual(Path(serial.csv_path).read_bytes(), Path(parallel.csv_path).read_bytes())
        rerun = run_sweep(self.config("rerun.csv"), jobs=2, progress=False)
        self.assertEqual(Path(serial.csv_path).read_bytes(), Path(rerun.csv_path).read_bytes())

    def test_csv_header(self):
        """Test CSV header and empty wall time"""
        result = run_sweep(self.config("c.csv", n_values=[2], q_values=[2], trials=2), progress=False)
        lines = Path(result.csv_path).read_text().splitlines()
        self.assertEqual(lines[0], ",".join(Config.CSV_COLUMNS))
        self.assertEqual(len(lines), 3)
        # wall_ms stays empty without record_timing
        self.assertEqual(lines[1].split(",")[10], "")

    def test_ratio_grid(self):
        """Test q/n ratio grid"""
        runner = SweepRunner(self.config("d.csv", q_values=[], q_ratios=[0.5, 1.0], n_values=[4]),
                             progress=False)
        self.assertEqual(runner.config.cells(), [(4, 2), (4, 4)])
        self.assertEqual(len(runner.tasks()), 12)

    def test_low_color_trend(self):
        """Test uniqueness drops as colors drop on a 5x5 board"""
        config = self.config("e.csv", n_values=[5], q_values=[2, 3, 4], trials=100)
        result = run_sweep(config, jobs=2, progress=False)
        p_unique = {c["q"]: c["p_unique_edge"] for c in result.summary["cells"]}
        self.assertLessEqual(p_unique[2], p_unique[3])
        self.assertLessEqual(p_unique[3], p_unique[4])
        low = [r for r in result.records if r.q == 2]
        self.assertEqual(len(low), 100)
        self.assertGreaterEqual(sum(not r.unique_edge for r in low), 90)


if __name__ == "__main__":
    unittest.main(verbosity=2)
