"""
Configuration settings for the jigsaw puzzle laboratory
"""
import math
import os
from typing import List, Dict, Any, Optional


class Config:
    """Main configuration class"""

    # Exhaustive enumeration settings
    ORACLE_BUDGET = 2 ** 25        # max number of colorings q^(2n(n+1)) an exhaustive run may visit
    ENUMERATION_CHUNK = 2 ** 16    # colorings encoded per numpy batch

    # Solver settings
    CLASS_LIMIT = 10 ** 6          # distinct classes recorded before truncation
    NODE_BUDGET = 5 * 10 ** 7      # search nodes before a count is reported as a lower bound
    VERTEX_NODE_BUDGET = 10 ** 7
    TRIAL_TIME_BUDGET = 10.0       # seconds per sweep trial

    # Monte Carlo settings
    MIN_MC_TRIALS = 100
    MC_BATCH = 2 ** 14

    # Sweep output
    CSV_COLUMNS = [
        "n", "q", "model", "trial", "seed", "unique_edge", "unique_vertex",
        "distinct_classes", "raw_count", "duplicates", "wall_ms", "outcome",
    ]
    SCHEMA_VERSION = 1
    SIGNIFICANT_DIGITS = 12

    # Processing settings
    JOBS_ENV_VAR = "JIG_JOBS"
    DEFAULT_JOBS = 1

    # Renderer settings
    DEFAULT_CELL_SIZE = 48

    @classmethod
    def resolve_jobs(cls, cli_jobs: Optional[int] = None, config_jobs: Optional[int] = None) -> int:
        """Resolve parallelism: CLI flag, then environment, then config file, then default"""
        if cli_jobs is not None:
            jobs = cli_jobs
        elif os.environ.get(cls.JOBS_ENV_VAR):
            try:
                jobs = int(os.environ[cls.JOBS_ENV_VAR])
            except ValueError:
                raise ValueError(f"{cls.JOBS_ENV_VAR} must be an integer, "
                                 f"got {os.environ[cls.JOBS_ENV_VAR]!r}")
        elif config_jobs is not None:
            jobs = config_jobs
        else:
            jobs = cls.DEFAULT_JOBS

        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        return jobs


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _parse_int_list(value: str) -> List[int]:
    return [int(item) for item in value.split(",") if item.strip()]


def _parse_float_list(value: str) -> List[float]:
    return [float(item) for item in value.split(",") if item.strip()]


class SweepConfig:
    """Configuration for a phase-transition sweep"""

    # key -> parser for the key-value config file
    FIELD_PARSERS = {
        "n_values": _parse_int_list,
        "q_values": _parse_int_list,
        "q_ratios": _parse_float_list,
        "model": str.strip,
        "trials": int,
        "master_seed": int,
        "class_limit": int,
        "node_budget": int,
        "time_budget": float,
        "count_solutions": _parse_bool,
        "record_timing": _parse_bool,
        "output": str.strip,
        "jobs": int,
    }

    def __init__(self,
                 n_values: List[int],
                 q_values: Optional[List[int]] = None,
                 q_ratios: Optional[List[float]] = None,
                 model: str = "rot",
                 trials: int = 100,
                 master_seed: int = 0,
                 class_limit: int = Config.CLASS_LIMIT,
                 node_budget: int = Config.NODE_BUDGET,
                 time_budget: float = Config.TRIAL_TIME_BUDGET,
                 count_solutions: bool = False,
                 record_timing: bool = False,
                 output: str = "sweep.csv",
                 jobs: Optional[int] = None,
                 **kwargs):
        self.n_values = list(n_values)
        self.q_values = list(q_values) if q_values else []
        self.q_ratios = list(q_ratios) if q_ratios else []
        self.model = model
        self.trials = trials
        self.master_seed = master_seed
        self.class_limit = class_limit
        self.node_budget = node_budget
        self.time_budget = time_budget
        self.count_solutions = count_solutions
        self.record_timing = record_timing
        self.output = output
        self.jobs = jobs
        self.extra_params = kwargs

    def cells(self) -> List[tuple]:
        """Sorted, de-duplicated (n, q) cells covered by the sweep"""
        cells = set()
        for n in self.n_values:
            for q in self.q_values:
                cells.add((n, q))
            for ratio in self.q_ratios:
                cells.add((n, max(1, int(round(ratio * n)))))
        return sorted(cells)

    def validate(self) -> None:
        """Raise ValueError naming the first offending field"""
        if not self.n_values:
            raise ValueError("n_values: must be a non-empty list")
        if not self.q_values and not self.q_ratios:
            raise ValueError("q_values: one of q_values or q_ratios must be non-empty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n_values: every board side must be >= 1")
        if any(q < 1 for q in self.q_values):
            raise ValueError("q_values: every color count must be >= 1")
        if any(not math.isfinite(r) or r <= 0 for r in self.q_ratios):
            raise ValueError("q_ratios: ratios must be positive")
        if self.model not in ("rot", "fixed"):
            raise ValueError(f"model: expected 'rot' or 'fixed', got {self.model!r}")
        if self.trials < 1:
            raise ValueError("trials: must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed: must be non-negative")
        if self.class_limit < 1:
            raise ValueError("class_limit: must be >= 1")
        if self.node_budget < 1:
            raise ValueError("node_budget: must be >= 1")
        if self.time_budget <= 0:
            raise ValueError("time_budget: must be positive")
        if self.jobs is not None and self.jobs < 1:
            raise ValueError("jobs: must be >= 1")

    @classmethod
    def from_mapping(cls, values: Dict[str, str]) -> "SweepConfig":
        """Build a config from raw string values (config file or CLI overrides)"""
        parsed: Dict[str, Any] = {}
        for key, raw in values.items():
            if key not in cls.FIELD_PARSERS:
                raise ValueError(f"{key}: unknown sweep setting")
            try:
                parsed[key] = cls.FIELD_PARSERS[key](raw)
            except ValueError as e:
                raise ValueError(f"{key}: {e}")
        if "n_values" not in parsed:
            raise ValueError("n_values: required setting missing")
        return cls(**parsed)

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary"""
        return {
            "n_values": self.n_values,
            "q_values": self.q_values,
            "q_ratios": self.q_ratios,
            "model": self.model,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "class_limit": self.class_limit,
            "node_budget": self.node_budget,
            "time_budget": self.time_budget,
            "count_solutions": self.count_solutions,
            "record_timing": self.record_timing,
            "output": self.output,
            **self.extra_params
        }


class ExperimentParams:
    """Parameters of a Monte Carlo entropy experiment"""

    def __init__(self, n: int, q: int, model: str = "rot", trials: int = 10 ** 4, seed: int = 0):
        if n < 1:
            raise ValueError("n: must be >= 1")
        if q < 1:
            raise ValueError("q: must be >= 1")
        if trials < 1:
            raise ValueError("trials: must be >= 1")
        self.n = n
        self.q = q
        self.model = model
        self.trials = trials
        self.seed = seed

    @property
    def beta(self) -> Optional[float]:
        """q = n^beta; undefined (None) for n = 1"""
        if self.n == 1:
            return None
        return math.log(self.q) / math.log(self.n)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "q": self.q,
            "model": self.model,
            "trials": self.trials,
            "seed": self.seed,
            "beta": self.beta,
        }
