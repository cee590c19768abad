"""
Jigsaw Lab Package

A simulation and verification toolkit for random jigsaw puzzles with q edge
colors on an n x n board.

Main Features:
1. Seeded puzzle generation, JSON persistence and PNG rendering
2. Exact assembly enumeration and counting with uniqueness verdicts
3. Entropy of the image and of the box: closed forms, exhaustive enumeration, Monte Carlo
4. Greedy random assembly as an unbiased estimator of the assembly count
5. Reproducible parallel phase-transition sweeps with CSV/JSON output
"""

__version__ = "1.0.0"

from .core.model import (
    ModelVariant,
    Piece,
    CanonicalPiece,
    PieceBag,
    EdgeColoring,
    piece_at,
    rotate_coloring,
    canonical_coloring,
    canonicalize_piece,
    extract_bag,
    piece_type_census,
    expected_multiplicity,
    symmetry_order,
)
from .core.solver import (
    SolutionSet,
    AssemblyVerdict,
    enumerate_assemblies,
    naive_oracle_count,
    has_unique_edge_assembly,
    vertex_uniqueness,
    count_raw_assemblies,
    count_vertex_assemblies,
)
from .core.entropy import (
    EntropyReport,
    h_img_closed_form,
    h_box_leading_bound,
    exact_distributions,
    mc_entropy_estimates,
    entropy_gap_leading,
)
from .core.greedy import GreedyOutcome, EstimatorSummary, greedy_fill, estimate_raw_count, solution_scale_log2
from .core.sweep import TrialRecord, run_sweep
from .config.settings import Config, SweepConfig, ExperimentParams
from .generators.puzzle_generator import PuzzleGenerator, generate_puzzle
from .utils.helpers import derive_seed, PuzzleIO

__all__ = [
    # Model
    "ModelVariant", "Piece", "CanonicalPiece", "PieceBag", "EdgeColoring",
    "piece_at", "rotate_coloring", "canonical_coloring", "canonicalize_piece",
    "extract_bag", "piece_type_census", "expected_multiplicity", "symmetry_order",

    # Solver
    "SolutionSet", "AssemblyVerdict", "enumerate_assemblies", "naive_oracle_count",
    "has_unique_edge_assembly", "vertex_uniqueness", "count_raw_assemblies",
    "count_vertex_assemblies",

    # Entropy
    "EntropyReport", "h_img_closed_form", "h_box_leading_bound", "exact_distributions",
    "mc_entropy_estimates", "entropy_gap_leading",

    # Greedy
    "GreedyOutcome", "EstimatorSummary", "greedy_fill", "estimate_raw_count", "solution_scale_log2",

    # Harness
    "TrialRecord", "run_sweep", "Config", "SweepConfig", "ExperimentParams",
    "PuzzleGenerator", "generate_puzzle", "derive_seed", "PuzzleIO",
]
