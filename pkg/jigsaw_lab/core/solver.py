"""
Exact assembly enumeration, counting and uniqueness verdicts

Cells are filled in row-major order. The branch set at a cell is the set of
distinct (N, E, S, W) color tuples realizable by some piece still in the bag
that match the already placed north and west edges. Branching on tuples rather
than on (type, orientation) pairs makes every count a count of colorings.
"""
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import Config
from .batch import BatchEncoder
from .errors import BudgetExceededError
from .model import (
    EdgeColoring,
    ModelVariant,
    Piece,
    PieceBag,
    canonical_coloring,
    canonical_key,
    extract_bag,
    piece_rotations,
    rotate_piece,
    symmetry_order,
)

logger = logging.getLogger(__name__)


class SearchAborted(Exception):
    """Raised inside a search when its node or time budget runs out"""


@dataclass
class SolutionSet:
    """Distinguishable assemblies of a bag"""

    raw_count: int
    distinct_classes: List[EdgeColoring]
    truncated: bool
    limit: int
    model: ModelVariant
    complete: bool = True
    nodes: int = 0

    @property
    def class_count(self) -> int:
        return len(self.distinct_classes)

    def class_keys(self) -> List[Tuple[int, ...]]:
        return [canonical_key(c, self.model) for c in self.distinct_classes]

    def orbit_total(self) -> int:
        """Sum of class sizes 4/s; equals raw_count for a complete, untruncated rot enumeration"""
        if not self.model.rotations:
            return self.class_count
        return sum(4 // symmetry_order(c) for c in self.distinct_classes)


class VerdictReason(Enum):
    DUPLICATE_PIECES = "DuplicatePieces"
    SYMMETRIC_PIECE = "SymmetricPiece"
    MULTIPLE_EDGE_COLORINGS = "MultipleEdgeColorings"
    UNIQUE = "Unique"


@dataclass
class AssemblyVerdict:
    unique_edge: bool
    unique_vertex: bool
    reason: VerdictReason
    oracle_unique_vertex: Optional[bool] = None
    vertex_assemblies: Optional[int] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "unique_edge": self.unique_edge,
            "unique_vertex": self.unique_vertex,
            "reason": self.reason.value,
            "oracle_unique_vertex": self.oracle_unique_vertex,
            "vertex_assemblies": self.vertex_assemblies,
        }


@dataclass
class RawCount:
    """Count of raw assemblies; a lower bound when ``exact`` is False"""

    value: int
    exact: bool
    nodes: int


class AssemblyState:
    """
    Mutable search state over a bag: remaining counts and the partial edge grids

    The greedy assembler drives the same object, so both explore identical
    branch sets.
    """

    def __init__(self, bag: PieceBag):
        bag.validate()
        self.n = bag.n
        self.q = bag.q
        self.model = bag.model
        self.types: List[Piece] = [piece for piece, _ in bag.items]
        self.remaining: List[int] = [count for _, count in bag.items]

        # (north or None, west or None) -> [(tuple, type id)]
        index: Dict[Tuple[Optional[int], Optional[int]], List[Tuple[Piece, int]]] = {}
        for type_id, piece in enumerate(self.types):
            orientations = piece_rotations(piece) if self.model.rotations else [piece]
            for oriented in orientations:
                for key in ((oriented.north, oriented.west), (None, oriented.west),
                            (oriented.north, None), (None, None)):
                    index.setdefault(key, []).append((oriented, type_id))
        for entries in index.values():
            entries.sort()
        self.index = index

        n = self.n
        self.h: List[List[int]] = [[0] * n for _ in range(n + 1)]
        self.v: List[List[int]] = [[0] * (n + 1) for _ in range(n)]

    @property
    def cells(self) -> int:
        return self.n * self.n

    def branches(self, cell: int) -> List[Tuple[Piece, int]]:
        """Distinct tuples that fit at ``cell`` given the cells before it"""
        r, c = divmod(cell, self.n)
        north = self.h[r][c] if r > 0 else None
        west = self.v[r][c] if c > 0 else None
        remaining = self.remaining
        return [entry for entry in self.index.get((north, west), ()) if remaining[entry[1]]]

    def place(self, cell: int, oriented: Piece, type_id: int) -> None:
        r, c = divmod(cell, self.n)
        self.h[r][c] = oriented.north
        self.v[r][c + 1] = oriented.east
        self.h[r + 1][c] = oriented.south
        self.v[r][c] = oriented.west
        self.remaining[type_id] -= 1

    def remove(self, type_id: int) -> None:
        self.remaining[type_id] += 1

    def snapshot(self) -> EdgeColoring:
        return EdgeColoring(self.n, self.q, self.h, self.v)


class _Budget:
    """Node and wall-clock limits checked during a search"""

    def __init__(self, node_budget: Optional[int], deadline: Optional[float]):
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise SearchAborted("node budget")
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise SearchAborted("time budget")


def enumerate_assemblies(bag: PieceBag,
                         limit: int = Config.CLASS_LIMIT,
                         stop_after_classes: Optional[int] = None,
                         node_budget: Optional[int] = None,
                         time_budget: Optional[float] = None) -> SolutionSet:
    """
    Enumerate every coloring whose bag equals ``bag``

    Args:
        bag: The box of pieces
        limit: Number of distinct classes recorded before ``truncated`` is set
        stop_after_classes: Stop as soon as this many distinct classes are known
        node_budget: Abort after this many search nodes (result marked incomplete)
        time_budget: Abort after this many seconds (result marked incomplete)

    Returns:
        SolutionSet with classes in discovery order
    """
    if limit < 1:
        raise ValueError(f"limit: must be >= 1, got {limit}")
    state = AssemblyState(bag)
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    budget = _Budget(node_budget, deadline)
    model = bag.model
    cells = state.cells

    seen = set()
    classes: List[EdgeColoring] = []
    result = {"raw": 0, "truncated": False}

    class _Stop(Exception):
        pass

    def record() -> None:
        result["raw"] += 1
        coloring = state.snapshot()
        key = canonical_key(coloring, model)
        if key in seen:
            return
        if len(classes) >= limit:
            # an unseen class past the limit means at least limit + 1 classes exist
            result["truncated"] = True
            if stop_after_classes is not None and limit + 1 >= stop_after_classes:
                raise _Stop()
            return
        seen.add(key)
        classes.append(canonical_coloring(coloring) if model.rotations else coloring)
        if stop_after_classes is not None and len(classes) >= stop_after_classes:
            raise _Stop()

    def search(cell: int) -> None:
        budget.tick()
        if cell == cells:
            record()
            return
        for oriented, type_id in state.branches(cell):
            state.place(cell, oriented, type_id)
            search(cell + 1)
            state.remove(type_id)

    complete = True
    try:
        search(0)
    except _Stop:
        pass
    except SearchAborted as e:
        complete = False
        logger.warning(f"Enumeration stopped early ({e}) after {budget.nodes} nodes")

    return SolutionSet(
        raw_count=result["raw"],
        distinct_classes=classes,
        truncated=result["truncated"],
        limit=limit,
        model=model,
        complete=complete,
        nodes=budget.nodes,
    )


def count_raw_assemblies(bag: PieceBag, node_budget: Optional[int] = Config.NODE_BUDGET) -> RawCount:
    """Count-only backtracking; exact unless the node budget runs out"""
    state = AssemblyState(bag)
    budget = _Budget(node_budget, None)
    last = state.cells - 1

    def search(cell: int) -> int:
        budget.tick()
        branches = state.branches(cell)
        if cell == last:
            return len(branches)
        total = 0
        for oriented, type_id in branches:
            state.place(cell, oriented, type_id)
            total += search(cell + 1)
            state.remove(type_id)
        return total

    partial = {"value": 0}

    def top_level() -> int:
        # accumulate first-cell subtrees so an abort still leaves a lower bound
        budget.tick()
        branches = state.branches(0)
        if last == 0:
            return len(branches)
        for oriented, type_id in branches:
            state.place(0, oriented, type_id)
            partial["value"] += search(1)
            state.remove(type_id)
        return partial["value"]

    try:
        return RawCount(value=top_level(), exact=True, nodes=budget.nodes)
    except SearchAborted:
        logger.warning(f"Node budget {node_budget} exhausted; reporting a lower bound")
        return RawCount(value=partial["value"], exact=False, nodes=budget.nodes)


def has_unique_edge_assembly(c: EdgeColoring, model=ModelVariant.ROTATIONS_ALLOWED) -> bool:
    """True iff every assembly of c's box reproduces c's class"""
    solutions = enumerate_assemblies(extract_bag(c, model), stop_after_classes=2)
    return solutions.class_count == 1 and not solutions.truncated


def count_vertex_assemblies(c: EdgeColoring, node_budget: Optional[int] = Config.VERTEX_NODE_BUDGET) -> int:
    """
    Count placements of the physical pieces (position and quarter turn each) whose
    shared edges all match. Pieces are distinguishable objects, so identical pieces
    and in-place symmetries produce distinct assignments.
    """
    n = c.n
    pieces = list(c.pieces())
    used = [False] * len(pieces)
    h = [[0] * n for _ in range(n + 1)]
    v = [[0] * (n + 1) for _ in range(n)]
    budget = _Budget(node_budget, None)
    orientations = [[rotate_piece(p, k) for k in range(4)] for p in pieces]

    def search(cell: int) -> int:
        budget.tick()
        if cell == n * n:
            return 1
        r, col = divmod(cell, n)
        total = 0
        for i, options in enumerate(orientations):
            if used[i]:
                continue
            for oriented in options:
                if r > 0 and oriented.north != h[r][col]:
                    continue
                if col > 0 and oriented.west != v[r][col]:
                    continue
                h[r][col] = oriented.north
                v[r][col + 1] = oriented.east
                h[r + 1][col] = oriented.south
                v[r][col] = oriented.west
                used[i] = True
                total += search(cell + 1)
                used[i] = False
        return total

    try:
        return search(0)
    except SearchAborted:
        raise BudgetExceededError("vertex assembly oracle", budget.nodes, node_budget)


def vertex_uniqueness(c: EdgeColoring,
                      model=ModelVariant.ROTATIONS_ALLOWED,
                      oracle: bool = False,
                      node_budget: Optional[int] = Config.VERTEX_NODE_BUDGET) -> AssemblyVerdict:
    """
    Decide unique vertex assembly by characterization

    For n >= 2 the puzzle has a unique vertex assembly iff it has no duplicate
    piece types, no piece with r(J) < 4 (rotation model only) and a unique edge
    assembly. ``oracle=True`` additionally counts all placement/orientation
    assignments; the assembly is vertex-unique iff that count is 4 (rot) or 1 (fixed).
    """
    model = ModelVariant.parse(model)
    unique_edge = has_unique_edge_assembly(c, model)

    if c.n == 1:
        verdict = AssemblyVerdict(unique_edge, True, VerdictReason.UNIQUE)
    else:
        bag = extract_bag(c, model)
        if bag.has_duplicates:
            reason = VerdictReason.DUPLICATE_PIECES
        elif model.rotations and any(len(piece_rotations(piece)) < 4 for piece, _ in bag.items):
            reason = VerdictReason.SYMMETRIC_PIECE
        elif not unique_edge:
            reason = VerdictReason.MULTIPLE_EDGE_COLORINGS
        else:
            reason = VerdictReason.UNIQUE
        verdict = AssemblyVerdict(unique_edge, reason is VerdictReason.UNIQUE, reason)

    if oracle:
        if model.rotations:
            assignments = count_vertex_assemblies(c, node_budget)
            verdict.oracle_unique_vertex = assignments == 4 if c.n >= 2 else True
        else:
            assignments = _count_fixed_vertex_assemblies(c, node_budget)
            verdict.oracle_unique_vertex = assignments == 1
        verdict.vertex_assemblies = assignments
    return verdict


def _count_fixed_vertex_assemblies(c: EdgeColoring, node_budget: Optional[int]) -> int:
    """Placements of distinguishable pieces without rotation"""
    n = c.n
    pieces = list(c.pieces())
    used = [False] * len(pieces)
    h = [[0] * n for _ in range(n + 1)]
    v = [[0] * (n + 1) for _ in range(n)]
    budget = _Budget(node_budget, None)

    def search(cell: int) -> int:
        budget.tick()
        if cell == n * n:
            return 1
        r, col = divmod(cell, n)
        total = 0
        for i, piece in enumerate(pieces):
            if used[i]:
                continue
            if r > 0 and piece.north != h[r][col]:
                continue
            if col > 0 and piece.west != v[r][col]:
                continue
            h[r][col], v[r][col + 1], h[r + 1][col], v[r][col] = piece.north, piece.east, piece.south, piece.west
            used[i] = True
            total += search(cell + 1)
            used[i] = False
        return total

    try:
        return search(0)
    except SearchAborted:
        raise BudgetExceededError("vertex assembly oracle", budget.nodes, node_budget)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _oracle_partition(n: int, q: int, model: ModelVariant) -> Dict[bytes, np.ndarray]:
    """Bag row -> indices of all colorings with that bag (small spaces only)"""
    encoder = BatchEncoder(n, q, model)
    colors = encoder.colorings(0, encoder.total_colorings())
    rows = encoder.bag_rows(encoder.type_ids(colors))
    unique_rows, inverse = np.unique(rows, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(len(unique_rows) + 1))
    return {
        unique_rows[i].tobytes(): order[bounds[i]:bounds[i + 1]]
        for i in range(len(unique_rows))
    }


def naive_oracle_count(bag: PieceBag, budget: int = Config.ORACLE_BUDGET) -> SolutionSet:
    """
    Scan every coloring of the board and keep those whose bag equals ``bag``

    Independent of the backtracking search; used to cross-check it.
    """
    bag.validate()
    encoder = BatchEncoder(bag.n, bag.q, bag.model)
    total = encoder.total_colorings()
    if total > budget:
        raise BudgetExceededError("naive oracle", total, budget)

    target = np.sort(np.array(
        [encoder.type_id_of(piece) for piece, count in bag.items for _ in range(count)],
        dtype=np.int64,
    ))

    if total <= Config.ENUMERATION_CHUNK:
        matches = _oracle_partition(bag.n, bag.q, bag.model).get(target.tobytes(), np.empty(0, dtype=np.int64))
        matched_colors = encoder.colorings(0, total)[matches]
    else:
        found = []
        for start in range(0, total, Config.ENUMERATION_CHUNK):
            colors = encoder.colorings(start, min(start + Config.ENUMERATION_CHUNK, total))
            rows = encoder.bag_rows(encoder.type_ids(colors))
            found.append(colors[np.all(rows == target, axis=1)])
        matched_colors = np.concatenate(found) if found else np.empty((0, encoder.edges), dtype=np.int64)

    classes: Dict[Tuple[int, ...], EdgeColoring] = {}
    for row in matched_colors.tolist():
        coloring = EdgeColoring.from_flat(bag.n, bag.q, row)
        key = canonical_key(coloring, bag.model)
        if key not in classes:
            classes[key] = canonical_coloring(coloring) if bag.model.rotations else coloring

    return SolutionSet(
        raw_count=len(matched_colors),
        distinct_classes=[classes[key] for key in sorted(classes)],
        truncated=False,
        limit=max(1, len(classes)),
        model=bag.model,
    )
