"""
Entropy of the assembled image (IMG) and of the box of pieces (BOX)

All entropies are in bits. Closed forms, exact values by exhaustive
enumeration, and Monte Carlo plug-in estimates share one report type.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from ..config.settings import Config, ExperimentParams
from .batch import BatchEncoder
from .errors import BudgetExceededError, OutOfRegimeError
from .model import ModelVariant, edge_count, expected_multiplicity
from ..utils.helpers import make_rng, round_significant

logger = logging.getLogger(__name__)

LOG2_E = math.log2(math.e)


class EntropyMethod(Enum):
    CLOSED_FORM = "ClosedForm"
    EXACT_ENUMERATION = "ExactEnumeration"
    MONTE_CARLO = "MonteCarlo"


@dataclass
class EntropyReport:
    """Values of H(IMG), H(BOX) and related quantities for one (n, q, model)"""

    n: int
    q: int
    model: ModelVariant
    method: EntropyMethod
    h_img: float
    h_box: Optional[float] = None
    h_box_subadditive: Optional[float] = None
    h_box_subadditive_stderr: Optional[float] = None
    h_box_leading_bound: Optional[float] = None
    gap: Optional[float] = None
    p_unique_edge: Optional[float] = None
    duplicate_probability: Optional[float] = None
    duplicate_probability_stderr: Optional[float] = None
    samples: Optional[int] = None
    multiplicities: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def beta(self) -> Optional[float]:
        return beta(self.n, self.q)

    def to_dict(self) -> Dict[str, Any]:
        """Stable JSON record: frozen key names, floats at 12 significant digits"""
        r = round_significant
        record = {
            "schema_version": Config.SCHEMA_VERSION,
            "n": self.n,
            "q": self.q,
            "model": self.model.value,
            "method": self.method.value,
            "beta": r(self.beta),
            "samples": self.samples,
            "h_img": r(self.h_img),
            "h_box": r(self.h_box),
            "h_box_subadditive": r(self.h_box_subadditive),
            "h_box_subadditive_stderr": r(self.h_box_subadditive_stderr),
            "h_box_leading_bound": r(self.h_box_leading_bound),
            "gap": r(self.gap),
            "p_unique_edge": r(self.p_unique_edge),
            "duplicate_probability": r(self.duplicate_probability),
            "duplicate_probability_stderr": r(self.duplicate_probability_stderr),
            "multiplicities": [
                {key: (r(value) if isinstance(value, float) else value) for key, value in entry.items()}
                for entry in self.multiplicities
            ],
        }
        return record


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def beta(n: int, q: int) -> Optional[float]:
    """Exponent with q = n^beta; undefined for n = 1"""
    if n == 1:
        return None
    return math.log(q) / math.log(n)


def critical_q(n: int, model=ModelVariant.ROTATIONS_ALLOWED) -> float:
    """Color count below which multiple assemblies are expected: 2n/sqrt(e) (rot), n/sqrt(e) (fixed)"""
    factor = 2.0 if ModelVariant.parse(model).rotations else 1.0
    return factor * n / math.sqrt(math.e)


def symmetry_class_probabilities(n: int, q: int) -> Dict[int, Fraction]:
    """
    Probability that a uniform coloring has symmetry order 4, 2 or 1

    90-degree symmetry ties edges in groups of four, 180-degree symmetry in pairs.
    """
    half = n * (n + 1)  # always even
    p4 = Fraction(1, q ** (3 * half // 2))
    p2_or_more = Fraction(1, q ** half)
    return {4: p4, 2: p2_or_more - p4, 1: 1 - p2_or_more}


def h_img_closed_form(n: int, q: int, model=ModelVariant.ROTATIONS_ALLOWED) -> float:
    """
    Exact H(IMG) for every n, q

    Rotation model: 2n(n+1) log2 q - 2 + q^-n(n+1) + q^-3n(n+1)/2.
    Fixed orientation: 2n(n+1) log2 q.
    """
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    if q == 1:
        return 0.0
    edges = edge_count(n)
    if not ModelVariant.parse(model).rotations:
        return edges * math.log2(q)
    half = n * (n + 1)
    return edges * math.log2(q) - 2 + q ** (-half) + q ** (-(3 * half // 2))


def h_box_leading_bound(n: int, q: int, model=ModelVariant.ROTATIONS_ALLOWED) -> float:
    """
    Leading terms of the upper bound on H(BOX), valid for q >= sqrt(n) log2 n

    Rotation model: 4n^2 log2 q - 2n^2 log2 n - (2 - log2 e) n^2.
    Fixed orientation: 4n^2 log2 q - 2n^2 log2 n + (log2 e) n^2.
    Lower-order corrections are not included.
    """
    if n < 2:
        raise OutOfRegimeError(f"n: leading-order bound needs n >= 2, got {n}")
    threshold = math.sqrt(n) * math.log2(n)
    if q < threshold:
        raise OutOfRegimeError(f"q: leading-order bound needs q >= sqrt(n) log2 n = {threshold:.4g}, got {q}")
    n2 = n * n
    leading = 4 * n2 * math.log2(q) - 2 * n2 * math.log2(n)
    if ModelVariant.parse(model).rotations:
        return leading - (2 - LOG2_E) * n2
    return leading + LOG2_E * n2


def entropy_gap_leading(n: int, q: int) -> float:
    """2n^2 log2(min(q, n/q)): leading term of H(IMG) - H(BOX), a diagnostic not a certificate"""
    if not 2 <= q <= n:
        raise ValueError(f"q: must satisfy 2 <= q <= n, got q={q}, n={n}")
    return 2 * n * n * math.log2(min(Fraction(q), Fraction(n, q)))


def _entropy_from_counts(counts, total: int) -> float:
    """H = log2 T - (1/T) sum c log2 c over positive integer counts"""
    multiplicity = Counter(int(c) for c in counts if c > 0)
    weighted = math.fsum(m * c * math.log2(c) for c, m in multiplicity.items())
    return max(0.0, math.log2(total) - weighted / total)


def closed_form_report(n: int, q: int, model=ModelVariant.ROTATIONS_ALLOWED) -> EntropyReport:
    model = ModelVariant.parse(model)
    report = EntropyReport(n=n, q=q, model=model, method=EntropyMethod.CLOSED_FORM,
                           h_img=h_img_closed_form(n, q, model))
    try:
        report.h_box_leading_bound = h_box_leading_bound(n, q, model)
    except OutOfRegimeError:
        pass
    if 2 <= q <= n:
        report.gap = entropy_gap_leading(n, q)
    return report


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------

class _BagTally:
    """
    Per-bag coloring counts and symmetry-order sums accumulated over chunks

    Sorted bag rows are packed into one base-T integer when T^(n^2) fits in
    int64; otherwise rows are keyed by their bytes.
    """

    COMPACT_AT = 2 ** 22

    def __init__(self, types: int, cells: int):
        self.packed = types ** cells < 2 ** 62
        if self.packed:
            self.weights = types ** np.arange(cells - 1, -1, -1, dtype=np.int64)
        self.parts = []
        self.pending = 0
        self.by_bytes: Dict[bytes, List[int]] = {}

    def add(self, rows: np.ndarray, symmetry: np.ndarray) -> None:
        if self.packed:
            keys, inverse, counts = np.unique(rows @ self.weights, return_inverse=True, return_counts=True)
            sums = np.bincount(inverse.reshape(-1), weights=symmetry, minlength=len(keys))
            self.parts.append((keys, counts, np.rint(sums).astype(np.int64)))
            self.pending += len(keys)
            if self.pending > self.COMPACT_AT:
                self._compact()
            return

        unique_rows, inverse, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
        sums = np.bincount(inverse.reshape(-1), weights=symmetry, minlength=len(unique_rows))
        for row, count, total in zip(unique_rows, counts.tolist(), np.rint(sums).astype(np.int64).tolist()):
            entry = self.by_bytes.setdefault(row.tobytes(), [0, 0])
            entry[0] += count
            entry[1] += total

    def _compact(self) -> None:
        keys = np.concatenate([p[0] for p in self.parts])
        counts = np.concatenate([p[1] for p in self.parts])
        sums = np.concatenate([p[2] for p in self.parts])
        merged, inverse = np.unique(keys, return_inverse=True)
        inverse = inverse.reshape(-1)
        self.parts = [(merged,
                       np.bincount(inverse, weights=counts, minlength=len(merged)).astype(np.int64),
                       np.bincount(inverse, weights=sums, minlength=len(merged)).astype(np.int64))]
        self.pending = len(merged)

    def totals(self):
        """(coloring count, symmetry-order sum) per distinct bag"""
        if self.packed:
            if not self.parts:
                return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
            self._compact()
            _, counts, sums = self.parts[0]
            return counts, sums
        values = list(self.by_bytes.values())
        return (np.array([v[0] for v in values], dtype=np.int64),
                np.array([v[1] for v in values], dtype=np.int64))


def exact_distributions(n: int, q: int, model=ModelVariant.ROTATIONS_ALLOWED,
                        budget: int = Config.ORACLE_BUDGET,
                        progress: bool = False) -> EntropyReport:
    """
    Exact H(IMG), H(BOX), sum_J H(X_J) and P(unique edge assembly) over all q^(2n(n+1)) colorings

    Probability masses are integer counts over the total until the final
    logarithms. The number of distinguishable assemblies of a bag equals the
    number of rotation classes among the colorings carrying it, which is
    (sum of their symmetry orders) / 4 under rotation and their count otherwise.
    """
    model = ModelVariant.parse(model)
    encoder = BatchEncoder(n, q, model)
    total = encoder.total_colorings()
    if total > budget:
        raise BudgetExceededError("exact enumeration", total, budget)

    cells = n * n
    types = encoder.type_count
    chunk = max(1024, min(Config.ENUMERATION_CHUNK, 2 ** 22 // max(types, 1)))

    stabilizer_counts = np.zeros(5, dtype=np.int64)
    tally = _BagTally(types, cells)
    histogram = np.zeros((types, cells + 1), dtype=np.int64)
    duplicates = 0

    logger.info(f"Enumerating {total} colorings (n={n}, q={q}, model={model.value})")
    batches = encoder.iter_chunks(chunk)
    for colors in tqdm(batches, desc="Enumerating colorings", total=-(-total // chunk), disable=not progress):
        type_ids = encoder.type_ids(colors)
        if model.rotations:
            stabilizers = encoder.stabilizers(colors)
            stabilizer_counts += np.bincount(stabilizers, minlength=5)
        else:
            stabilizers = np.ones(colors.shape[0], dtype=np.int64)
        tally.add(encoder.bag_rows(type_ids), stabilizers)

        multiplicities = encoder.multiplicities(type_ids)
        duplicates += int((multiplicities.max(axis=1) >= 2).sum())
        offsets = (cells + 1) * np.arange(types, dtype=np.int64)
        histogram += np.bincount((multiplicities + offsets).ravel(),
                                 minlength=types * (cells + 1)).reshape(types, cells + 1)

    bag_counts, bag_symmetry = tally.totals()
    log_total = math.log2(total)
    if model.rotations:
        # a class of symmetry order s holds 4/s colorings
        h_img = math.fsum(
            Fraction(int(stabilizer_counts[s]), total) * (log_total + math.log2(s) - 2)
            for s in (1, 2, 4) if stabilizer_counts[s]
        )
        # a bag has one distinguishable assembly iff its symmetry orders sum to 4
        unique_mass = int(bag_counts[bag_symmetry == 4].sum())
    else:
        h_img = log_total
        unique_mass = int(bag_counts[bag_counts == 1].sum())

    h_box = _entropy_from_counts(bag_counts.tolist(), total)
    h_subadditive = math.fsum(_entropy_from_counts(histogram[j], total) for j in range(types))

    report = EntropyReport(
        n=n, q=q, model=model, method=EntropyMethod.EXACT_ENUMERATION,
        h_img=float(h_img),
        h_box=h_box,
        h_box_subadditive=h_subadditive,
        gap=float(h_img) - h_box,
        p_unique_edge=float(Fraction(unique_mass, total)),
        duplicate_probability=float(Fraction(duplicates, total)),
        samples=total,
        multiplicities=_exact_multiplicity_table(encoder, histogram, total),
    )
    try:
        report.h_box_leading_bound = h_box_leading_bound(n, q, model)
    except OutOfRegimeError:
        pass
    logger.info(f"Exact: H(IMG)={report.h_img:.9f} H(BOX)={report.h_box:.9f} "
                f"sum H(X_J)={report.h_box_subadditive:.9f}")
    return report


def _exact_multiplicity_table(encoder: BatchEncoder, histogram: np.ndarray, total: int,
                              max_types: int = 256) -> List[Dict[str, Any]]:
    if encoder.type_count > max_types:
        return []
    values = np.arange(histogram.shape[1], dtype=np.int64)
    table = []
    for j in range(encoder.type_count):
        table.append({
            "type": list(encoder.type_tuple(j)),
            "orbit": int(encoder.type_orbit[j]),
            "mean": float(Fraction(int((histogram[j] * values).sum()), total)),
            "stderr": 0.0,
            "expected": expected_multiplicity(int(encoder.type_orbit[j]), encoder.n, encoder.q),
        })
    return table


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def mc_entropy_estimates(params: ExperimentParams, progress: bool = False,
                         max_types_listed: int = 256) -> EntropyReport:
    """
    Plug-in estimates from ``params.trials`` sampled puzzles

    Reports sum_J H(X_J) from empirical marginals (unseen types contribute 0) with a
    delta-method standard error, the duplicate-piece probability, and the empirical
    mean of every X_J next to r(J) n^2 / q^4. ``gap`` is H(IMG) minus the
    subadditive estimate, so it understates H(IMG) - H(BOX).
    """
    if params.trials < Config.MIN_MC_TRIALS:
        raise ValueError(f"trials: Monte Carlo needs >= {Config.MIN_MC_TRIALS}, got {params.trials}")
    model = ModelVariant.parse(params.model)
    n, q, trials = params.n, params.q, params.trials
    encoder = BatchEncoder(n, q, model)
    cells = n * n
    types = encoder.type_count
    batch = max(1, min(Config.MC_BATCH, 2 ** 22 // max(types, 1)))
    offsets = (cells + 1) * np.arange(types, dtype=np.int64)

    def batches(rng):
        done = 0
        while done < trials:
            size = min(batch, trials - done)
            colors = rng.integers(0, q, size=(size, encoder.edges), dtype=np.int64)
            yield encoder.multiplicities(encoder.type_ids(colors))
            done += size

    histogram = np.zeros((types, cells + 1), dtype=np.int64)
    duplicates = 0
    for multiplicities in tqdm(batches(make_rng(params.seed)), desc="Sampling puzzles",
                               total=-(-trials // batch), disable=not progress):
        duplicates += int((multiplicities.max(axis=1) >= 2).sum())
        histogram += np.bincount((multiplicities + offsets).ravel(),
                                 minlength=types * (cells + 1)).reshape(types, cells + 1)

    with np.errstate(divide="ignore"):
        surprisal = np.where(histogram > 0, -np.log2(histogram / trials), 0.0)
    per_type = (histogram / trials * surprisal).sum(axis=1)
    h_subadditive = math.fsum(per_type.tolist())

    # second pass over the same stream: influence value sum_J -log2 p_J(X_J) per sample
    influence_sum = 0.0
    influence_sq = 0.0
    flat_surprisal = surprisal.ravel()
    for multiplicities in batches(make_rng(params.seed)):
        values = flat_surprisal[multiplicities + offsets].sum(axis=1)
        influence_sum += float(values.sum())
        influence_sq += float((values * values).sum())
    mean_influence = influence_sum / trials
    variance = max(0.0, influence_sq / trials - mean_influence ** 2) * trials / max(trials - 1, 1)

    p_dup = duplicates / trials
    report = EntropyReport(
        n=n, q=q, model=model, method=EntropyMethod.MONTE_CARLO,
        h_img=h_img_closed_form(n, q, model),
        h_box_subadditive=h_subadditive,
        h_box_subadditive_stderr=math.sqrt(variance / trials),
        duplicate_probability=p_dup,
        duplicate_probability_stderr=math.sqrt(p_dup * (1 - p_dup) / trials),
        samples=trials,
    )
    report.gap = report.h_img - h_subadditive
    try:
        report.h_box_leading_bound = h_box_leading_bound(n, q, model)
    except OutOfRegimeError:
        pass

    if types <= max_types_listed:
        values = np.arange(cells + 1, dtype=np.float64)
        means = (histogram * values).sum(axis=1) / trials
        second = (histogram * values ** 2).sum(axis=1) / trials
        variances = np.maximum(second - means ** 2, 0.0) * trials / max(trials - 1, 1)
        for j in range(types):
            report.multiplicities.append({
                "type": list(encoder.type_tuple(j)),
                "orbit": int(encoder.type_orbit[j]),
                "mean": float(means[j]),
                "stderr": float(math.sqrt(variances[j] / trials)),
                "expected": expected_multiplicity(int(encoder.type_orbit[j]), n, q),
            })
    else:
        logger.info(f"{types} piece types: per-type table omitted")

    logger.info(f"Monte Carlo: sum H(X_J) ~ {h_subadditive:.6f} +/- {report.h_box_subadditive_stderr:.2g} "
                f"over {trials} puzzles")
    return report
