"""
Utility functions: logging, seeding, puzzle files and result persistence
"""
import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import List, Dict, Any, Optional, Tuple, Union

import numpy as np

from ..config.settings import Config
from ..core.errors import InvalidPuzzleError
from ..core.model import EdgeColoring, ModelVariant


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# bit widths of the packed stream seed (low to high): trial, q, n, master seed
_TRIAL_BITS = 24
_Q_BITS = 20
_N_BITS = 20


def setup_logging(level: int = logging.INFO) -> logging.Logger:
    """Attach a single stream handler to the package logger"""
    logger = logging.getLogger("jigsaw_lab")
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)

    return logger


def derive_seed(master_seed: int, n: int, q: int, trial_index: int) -> int:
    """
    Stream seed of one (cell, trial) task

    The four integers are packed into disjoint bit fields, so the result is
    injective for trial < 2**24, q < 2**20, n < 2**20 and any master seed >= 0.

    Args:
        master_seed: Sweep-level seed
        n: Board side
        q: Color count
        trial_index: Trial number within the cell

    Returns:
        Non-negative integer seed
    """
    limits = {"master_seed": None, "n": 1 << _N_BITS, "q": 1 << _Q_BITS,
              "trial_index": 1 << _TRIAL_BITS}
    values = {"master_seed": master_seed, "n": n, "q": q, "trial_index": trial_index}
    for name, value in values.items():
        if value < 0 or (limits[name] is not None and value >= limits[name]):
            raise ValueError(f"{name}: {value} outside the packable range")

    seed = master_seed
    seed = (seed << _N_BITS) | n
    seed = (seed << _Q_BITS) | q
    seed = (seed << _TRIAL_BITS) | trial_index
    return seed


def make_rng(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    """PCG64 generator seeded through SeedSequence; Generators pass through unchanged"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


class PuzzleIO:
    """Read and write puzzle JSON files"""

    @staticmethod
    def to_dict(coloring: EdgeColoring, model: Union[ModelVariant, str] = ModelVariant.ROTATIONS_ALLOWED) -> Dict[str, Any]:
        return {
            "n": coloring.n,
            "q": coloring.q,
            "model": ModelVariant.parse(model).value,
            "h": [list(row) for row in coloring.h],
            "v": [list(row) for row in coloring.v],
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> Tuple[EdgeColoring, ModelVariant]:
        """
        Parse a puzzle record

        Args:
            data: Decoded JSON object

        Returns:
            Tuple of (coloring, model)
        """
        if not isinstance(data, dict):
            raise InvalidPuzzleError("puzzle", "top-level JSON value must be an object")
        for field in ("n", "q", "h", "v"):
            if field not in data:
                raise InvalidPuzzleError(field, "missing")
        for field in ("n", "q"):
            if not isinstance(data[field], int) or isinstance(data[field], bool):
                raise InvalidPuzzleError(field, f"must be an integer, got {data[field]!r}")
        for field in ("h", "v"):
            grid = data[field]
            if not isinstance(grid, list) or not all(isinstance(row, list) for row in grid):
                raise InvalidPuzzleError(field, "must be a list of lists")
        model = ModelVariant.parse(data.get("model", "rot"))
        return EdgeColoring(data["n"], data["q"], data["h"], data["v"]), model

    @classmethod
    def save(cls, coloring: EdgeColoring, path: Union[str, Path],
             model: Union[ModelVariant, str] = ModelVariant.ROTATIONS_ALLOWED) -> str:
        path = Path(path)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(cls.to_dict(coloring, model), f)
            f.write("\n")
        return str(path)

    @classmethod
    def load(cls, path: Union[str, Path]) -> Tuple[EdgeColoring, ModelVariant]:
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))


def round_significant(value: Optional[float], digits: int = Config.SIGNIFICANT_DIGITS) -> Optional[float]:
    """Round a float to a fixed number of significant digits for stable JSON records"""
    if value is None:
        return None
    return float(f"{value:.{digits}g}")


class ResultWriter:
    """Persist sweep rows and summaries"""

    def __init__(self, columns: List[str] = None):
        self.columns = columns or Config.CSV_COLUMNS
        self.logger = logging.getLogger(__name__)

    def rows_to_csv(self, rows: List[Dict[str, Any]]) -> str:
        """Render rows with the fixed column order and '\\n' line endings"""
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: self._format(row.get(key)) for key in self.columns})
        return buffer.getvalue()

    @staticmethod
    def _format(value: Any) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        return str(value)

    def write_csv(self, rows: List[Dict[str, Any]], output_path: Union[str, Path]) -> str:
        output_path = Path(output_path)
        if output_path.parent != Path(""):
            output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', newline='', encoding='utf-8') as f:
            f.write(self.rows_to_csv(rows))
        self.logger.info(f"Wrote {len(rows)} rows to {output_path}")
        return str(output_path)

    def write_json(self, record: Any, output_path: Union[str, Path]) -> str:
        output_path = Path(output_path)
        if output_path.parent != Path(""):
            output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(record, f, indent=2, sort_keys=True)
            f.write("\n")
        self.logger.info(f"Wrote {output_path}")
        return str(output_path)


class ConfigurationHelper:
    """Helper for the key-value configuration file format"""

    TEMPLATE = """\
# jigsaw_lab sweep configuration: one `key = value` per line, lists comma-separated
n_values = 5
q_values = 2, 3, 4
# q_ratios = 0.5, 1.0
model = rot
trials = 100
master_seed = 0
class_limit = 1000000
node_budget = 50000000
time_budget = 10
count_solutions = false
record_timing = false
output = sweep.csv
# jobs = 4
"""

    @classmethod
    def create_config_template(cls, output_path: str) -> str:
        """Create a configuration template file"""
        with open(output_path, 'w', encoding='utf-8') as f:
            f.write(cls.TEMPLATE)
        return output_path

    @staticmethod
    def parse_config_text(text: str) -> Dict[str, str]:
        """Parse `key = value` lines; blank lines and `#` comments are ignored"""
        values: Dict[str, str] = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {number}: expected `key = value`, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ValueError(f"line {number}: empty key")
            if key in values:
                raise ValueError(f"{key}: set twice (line {number})")
            values[key] = value
        return values

    @classmethod
    def load_config(cls, config_path: str) -> Dict[str, str]:
        """Load configuration from file"""
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"config file not found: {config_path}")
        with open(config_path, 'r', encoding='utf-8') as f:
            return cls.parse_config_text(f.read())
