"""
Phase-transition sweeps: many random puzzles per (n, q) cell, uniqueness per puzzle
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import List, Dict, Any, Optional, Tuple

from tqdm import tqdm

from ..config.settings import Config, SweepConfig
from .entropy import beta, critical_q
from .model import ModelVariant, extract_bag, piece_rotations
from .solver import enumerate_assemblies
from ..generators.puzzle_generator import generate_puzzle
from ..utils.helpers import ResultWriter, derive_seed, round_significant


@dataclass
class TrialRecord:
    n: int
    q: int
    model: str
    trial: int
    seed: int
    unique_edge: bool
    unique_vertex: bool
    distinct_classes: int
    raw_count: int
    duplicates: bool
    wall_ms: Optional[int]
    outcome: str

    def to_row(self) -> Dict[str, Any]:
        return asdict(self)


# (n, q, model, trial, seed, class_limit, node_budget, time_budget, count_solutions, record_timing)
TrialTask = Tuple[int, int, str, int, int, int, int, float, bool, bool]


def run_trial(task: TrialTask) -> TrialRecord:
    """Generate one puzzle and decide its uniqueness; budget exhaustion lands in ``outcome``"""
    n, q, model_name, trial, seed, class_limit, node_budget, time_budget, count_solutions, record_timing = task
    model = ModelVariant.parse(model_name)
    start = time.perf_counter()

    coloring = generate_puzzle(n, q, seed)
    bag = extract_bag(coloring, model)
    solutions = enumerate_assemblies(
        bag,
        limit=class_limit,
        stop_after_classes=None if count_solutions else 2,
        node_budget=node_budget,
        time_budget=time_budget,
    )

    outcome = "ok" if solutions.complete else "budget"
    unique_edge = solutions.complete and solutions.class_count == 1 and not solutions.truncated
    if n == 1:
        unique_vertex = unique_edge
    else:
        symmetric = model.rotations and any(len(piece_rotations(p)) < 4 for p, _ in bag.items)
        unique_vertex = unique_edge and not bag.has_duplicates and not symmetric

    wall_ms = int(round((time.perf_counter() - start) * 1000)) if record_timing else None
    return TrialRecord(
        n=n, q=q, model=model.value, trial=trial, seed=seed,
        unique_edge=unique_edge,
        unique_vertex=unique_vertex,
        distinct_classes=max(solutions.class_count, 1),
        raw_count=solutions.raw_count,
        duplicates=bag.has_duplicates,
        wall_ms=wall_ms,
        outcome=outcome,
    )


@dataclass
class SweepResult:
    records: List[TrialRecord]
    summary: Dict[str, Any]
    csv_path: Optional[str] = None
    summary_path: Optional[str] = None


class SweepRunner:
    """Runs a SweepConfig over a process pool and persists sorted results"""

    def __init__(self, config: SweepConfig, jobs: Optional[int] = None, progress: bool = True):
        config.validate()
        self.config = config
        self.jobs = Config.resolve_jobs(jobs, config.jobs)
        self.progress = progress
        self.logger = logging.getLogger(self.__class__.__name__)
        self.writer = ResultWriter()

    def tasks(self) -> List[TrialTask]:
        c = self.config
        return [
            (n, q, c.model, trial, derive_seed(c.master_seed, n, q, trial),
             c.class_limit, c.node_budget, c.time_budget, c.count_solutions, c.record_timing)
            for n, q in c.cells()
            for trial in range(c.trials)
        ]

    def _execute(self, tasks: List[TrialTask]) -> List[TrialRecord]:
        records = []
        if self.jobs == 1:
            for task in tqdm(tasks, desc="Trials", disable=not self.progress):
                records.append(self._safe_run(task))
            return records

        with ProcessPoolExecutor(max_workers=self.jobs) as executor:
            futures = {executor.submit(run_trial, task): task for task in tasks}
            for future in tqdm(as_completed(futures), total=len(futures),
                               desc="Trials", disable=not self.progress):
                task = futures[future]
                try:
                    records.append(future.result())
                except Exception as e:
                    self.logger.error(f"Trial {task[:4]} failed: {e}")
                    records.append(self._error_record(task))
        return records

    def _safe_run(self, task: TrialTask) -> TrialRecord:
        try:
            return run_trial(task)
        except Exception as e:
            self.logger.error(f"Trial {task[:4]} failed: {e}")
            return self._error_record(task)

    @staticmethod
    def _error_record(task: TrialTask) -> TrialRecord:
        n, q, model, trial, seed = task[:5]
        return TrialRecord(n=n, q=q, model=ModelVariant.parse(model).value, trial=trial, seed=seed,
                           unique_edge=False, unique_vertex=False, distinct_classes=1,
                           raw_count=0, duplicates=False, wall_ms=None, outcome="error")

    def summarize(self, records: List[TrialRecord]) -> Dict[str, Any]:
        """Per-cell rates computed directly from the rows"""
        cells: Dict[Tuple[int, int], List[TrialRecord]] = {}
        for record in records:
            cells.setdefault((record.n, record.q), []).append(record)

        summary_cells = []
        for (n, q), rows in sorted(cells.items()):
            count = len(rows)
            summary_cells.append({
                "n": n,
                "q": q,
                "model": self.config.model,
                "trials": count,
                "p_unique_edge": sum(r.unique_edge for r in rows) / count,
                "p_unique_vertex": sum(r.unique_vertex for r in rows) / count,
                "p_duplicates": sum(r.duplicates for r in rows) / count,
                "budget_outcomes": sum(r.outcome == "budget" for r in rows),
                "errors": sum(r.outcome == "error" for r in rows),
                "beta": round_significant(beta(n, q)),
                "critical_q": round_significant(critical_q(n, self.config.model)),
            })
        return {
            "schema_version": Config.SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "cells": summary_cells,
        }

    def run(self, write: bool = True) -> SweepResult:
        tasks = self.tasks()
        self.logger.info(f"Running {len(tasks)} trials over {len(self.config.cells())} cells "
                         f"with {self.jobs} job(s)")
        records = sorted(self._execute(tasks), key=lambda r: (r.n, r.q, r.trial))
        summary = self.summarize(records)
        result = SweepResult(records=records, summary=summary)

        if write:
            output = Path(self.config.output)
            result.csv_path = self.writer.write_csv([r.to_row() for r in records], output)
            result.summary_path = self.writer.write_json(summary, output.with_suffix(".summary.json"))

        for cell in summary["cells"]:
            self.logger.info(f"n={cell['n']} q={cell['q']}: P(unique edge)={cell['p_unique_edge']:.3f} "
                             f"P(unique vertex)={cell['p_unique_vertex']:.3f} "
                             f"P(duplicates)={cell['p_duplicates']:.3f}")
        return result


def run_sweep(config: SweepConfig, jobs: Optional[int] = None, progress: bool = True,
              write: bool = True) -> SweepResult:
    return SweepRunner(config, jobs=jobs, progress=progress).run(write=write)
