"""
Greedy random assembly and the tree-size estimator built on it

A greedy run fills the board in the exact solver's cell order, choosing
uniformly among the same branch set. The product of branch-set sizes along a
successful run (0 on a dead end) is an unbiased estimate of the raw assembly
count.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

import numpy as np
from tqdm import tqdm

from .model import PieceBag
from .solver import AssemblyState
from ..utils.helpers import make_rng

logger = logging.getLogger(__name__)


@dataclass
class GreedyOutcome:
    success: bool
    estimate: int
    path_length: int


@dataclass
class EstimatorSummary:
    """
    Mean and standard error of the greedy estimates

    ``mean`` and ``stderr`` are ``math.inf`` when they exceed the float range;
    the log2 fields are always finite (None for a zero value).
    """

    runs: int
    mean: float
    stderr: float
    success_rate: float
    log2_mean: Optional[float] = None
    log2_stderr: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "runs": self.runs,
            "mean": self.mean if math.isfinite(self.mean) else None,
            "stderr": self.stderr if math.isfinite(self.stderr) else None,
            "success_rate": self.success_rate,
            "log2_mean": self.log2_mean,
            "log2_stderr": self.log2_stderr,
        }


def _ratio_to_float(numerator: int, denominator: int) -> float:
    try:
        return float(Fraction(numerator, denominator))
    except OverflowError:
        return math.inf


def greedy_fill(bag: PieceBag, seed: Union[int, np.random.Generator, None] = None) -> GreedyOutcome:
    """One random walk down the assembly tree"""
    state = AssemblyState(bag)
    rng = make_rng(seed)
    estimate = 1
    for cell in range(state.cells):
        branches = state.branches(cell)
        if not branches:
            return GreedyOutcome(success=False, estimate=0, path_length=cell)
        estimate *= len(branches)
        oriented, type_id = branches[int(rng.integers(len(branches)))]
        state.place(cell, oriented, type_id)
    return GreedyOutcome(success=True, estimate=estimate, path_length=state.cells)


def estimate_raw_count(bag: PieceBag, runs: int, seed: int = 0, progress: bool = False) -> EstimatorSummary:
    """
    Average ``runs`` greedy estimates drawn from one seeded stream

    Estimates stay exact integers; mean and standard error are formed from exact
    sums so estimates spanning many orders of magnitude do not lose precision.
    """
    if runs < 1:
        raise ValueError(f"runs: must be >= 1, got {runs}")
    rng = make_rng(seed)
    total = 0
    total_sq = 0
    successes = 0
    for _ in tqdm(range(runs), desc="Greedy runs", disable=not progress):
        outcome = greedy_fill(bag, rng)
        total += outcome.estimate
        total_sq += outcome.estimate * outcome.estimate
        successes += outcome.success

    # stderr^2 = (runs * sum x^2 - (sum x)^2) / (runs^2 (runs - 1))
    spread = runs * total_sq - total * total
    scale = runs * runs * (runs - 1)
    if runs > 1 and spread > 0:
        # math.log2 accepts integers beyond the float range
        log2_stderr = 0.5 * (math.log2(spread) - math.log2(scale))
        variance = _ratio_to_float(spread, scale)
        if math.isfinite(variance):
            stderr = math.sqrt(variance)
        else:
            stderr = 2.0 ** log2_stderr if log2_stderr < 1024 else math.inf
    else:
        log2_stderr = None
        stderr = 0.0

    summary = EstimatorSummary(
        runs=runs,
        mean=_ratio_to_float(total, runs),
        stderr=stderr,
        success_rate=successes / runs,
        log2_mean=math.log2(total) - math.log2(runs) if total > 0 else None,
        log2_stderr=log2_stderr,
    )
    if math.isfinite(summary.mean):
        logger.info(f"Greedy estimator: mean={summary.mean:.6g} +/- {summary.stderr:.3g} "
                    f"over {runs} runs, success rate {summary.success_rate:.3f}")
    else:
        logger.info(f"Greedy estimator: log2 mean={summary.log2_mean:.6f} over {runs} runs, "
                    f"success rate {summary.success_rate:.3f}")
    return summary


def solution_scale_log2(n: int, q: int) -> float:
    """n^2 log2(min(q^2, n^2/q^2)), the leading exponent of the solution count"""
    if not 2 <= q <= n:
        raise ValueError(f"q: must satisfy 2 <= q <= n, got q={q}, n={n}")
    return n * n * math.log2(min(Fraction(q * q), Fraction(n * n, q * q)))
