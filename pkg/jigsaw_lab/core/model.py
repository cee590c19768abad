"""
Puzzle sample space: edge colorings, pieces, rotations and piece bags

Index conventions (n x n board, q colors):
- ``h`` is an (n+1) x n grid, ``h[r][c]`` the edge above cell (r, c), ``h[n][c]`` the bottom boundary
- ``v`` is an n x (n+1) grid, ``v[r][c]`` the edge left of cell (r, c), ``v[r][n]`` the right boundary
- a piece is read clockwise as (north, east, south, west)
- one clockwise quarter turn maps (N, E, S, W) to (W, N, E, S)

Flattened edge order is all of ``h`` row-major followed by all of ``v`` row-major.
"""
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import chain
from typing import Dict, Iterator, List, Mapping, NamedTuple, Tuple, Union

from .errors import InvalidBagError, InvalidPuzzleError


class ModelVariant(Enum):
    """Whether pieces may be rotated during reassembly"""

    ROTATIONS_ALLOWED = "rot"
    FIXED_ORIENTATION = "fixed"

    @classmethod
    def parse(cls, value: Union["ModelVariant", str]) -> "ModelVariant":
        if isinstance(value, cls):
            return value
        aliases = {
            "rot": cls.ROTATIONS_ALLOWED,
            "rotations": cls.ROTATIONS_ALLOWED,
            "rotationsallowed": cls.ROTATIONS_ALLOWED,
            "fixed": cls.FIXED_ORIENTATION,
            "fixedorientation": cls.FIXED_ORIENTATION,
        }
        key = str(value).replace("_", "").replace("-", "").lower()
        if key not in aliases:
            raise InvalidPuzzleError("model", f"expected 'rot' or 'fixed', got {value!r}")
        return aliases[key]

    @property
    def rotations(self) -> bool:
        return self is ModelVariant.ROTATIONS_ALLOWED


class Piece(NamedTuple):
    """Edge colors of one piece, clockwise from the top"""

    north: int
    east: int
    south: int
    west: int


@dataclass(frozen=True)
class CanonicalPiece:
    """Rotation-orbit representative of a piece type J with orbit size r(J)"""

    edges: Piece
    orbit: int

    def __post_init__(self):
        if self.orbit not in (1, 2, 4):
            raise InvalidPuzzleError("orbit", f"must be 1, 2 or 4, got {self.orbit}")
        if canonicalize_piece(self.edges).edges != self.edges:
            raise InvalidPuzzleError("edges", f"{tuple(self.edges)} is not the lex-min rotation")


class PieceCensus(NamedTuple):
    r1: int
    r2: int
    r4: int
    total: int


# ---------------------------------------------------------------------------
# Edge index tables (shared with the vectorized encoder)
# ---------------------------------------------------------------------------

def edge_count(n: int) -> int:
    return 2 * n * (n + 1)


@lru_cache(maxsize=None)
def piece_edge_indices(n: int) -> Tuple[Tuple[int, int, int, int], ...]:
    """Flattened edge indices (N, E, S, W) of every cell in row-major order"""
    offset = n * (n + 1)
    cells = []
    for r in range(n):
        for c in range(n):
            cells.append((
                r * n + c,
                offset + r * (n + 1) + c + 1,
                (r + 1) * n + c,
                offset + r * (n + 1) + c,
            ))
    return tuple(cells)


@lru_cache(maxsize=None)
def rotation_permutations(n: int) -> Tuple[Tuple[int, ...], ...]:
    """``perms[k][i]`` is the source edge of edge ``i`` after ``k`` clockwise quarter turns"""
    offset = n * (n + 1)
    single = [0] * edge_count(n)
    for i in range(n + 1):
        for j in range(n):
            # new h[i][j] = old v[n-1-j][i]
            single[i * n + j] = offset + (n - 1 - j) * (n + 1) + i
    for i in range(n):
        for j in range(n + 1):
            # new v[i][j] = old h[n-j][i]
            single[offset + i * (n + 1) + j] = (n - j) * n + i

    perms = [tuple(range(edge_count(n)))]
    for _ in range(3):
        previous = perms[-1]
        perms.append(tuple(previous[single[i]] for i in range(len(single))))
    return tuple(perms)


@lru_cache(maxsize=None)
def _serialization_permutations(n: int) -> Tuple[Tuple[int, ...], ...]:
    order = tuple(chain.from_iterable(piece_edge_indices(n)))
    return tuple(tuple(perm[i] for i in order) for perm in rotation_permutations(n))


# ---------------------------------------------------------------------------
# Edge coloring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeColoring:
    """A full board edge coloring; the puzzle and every assembly are values of this type"""

    n: int
    q: int
    h: Tuple[Tuple[int, ...], ...]
    v: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidPuzzleError("n", f"board side must be a positive integer, got {self.n!r}")
        if not isinstance(self.q, int) or self.q < 1:
            raise InvalidPuzzleError("q", f"color count must be a positive integer, got {self.q!r}")
        object.__setattr__(self, "h", tuple(tuple(row) for row in self.h))
        object.__setattr__(self, "v", tuple(tuple(row) for row in self.v))
        self._check_grid("h", self.h, self.n + 1, self.n)
        self._check_grid("v", self.v, self.n, self.n + 1)

    def _check_grid(self, name: str, grid, rows: int, cols: int) -> None:
        if len(grid) != rows or any(len(row) != cols for row in grid):
            raise InvalidPuzzleError(name, f"expected a {rows}x{cols} grid")
        for row in grid:
            for color in row:
                if not isinstance(color, int) or isinstance(color, bool) or not 0 <= color < self.q:
                    raise InvalidPuzzleError(name, f"color {color!r} outside [0, {self.q})")

    @classmethod
    def from_flat(cls, n: int, q: int, flat) -> "EdgeColoring":
        flat = [int(x) for x in flat]
        if len(flat) != edge_count(n):
            raise InvalidPuzzleError("edges", f"expected {edge_count(n)} entries, got {len(flat)}")
        split = n * (n + 1)
        h = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n + 1))
        v = tuple(tuple(flat[split + i * (n + 1):split + (i + 1) * (n + 1)]) for i in range(n))
        return cls(n, q, h, v)

    @classmethod
    def monochromatic(cls, n: int, q: int = 1, color: int = 0) -> "EdgeColoring":
        return cls.from_flat(n, q, [color] * edge_count(n))

    @property
    def flat(self) -> Tuple[int, ...]:
        return tuple(chain(chain.from_iterable(self.h), chain.from_iterable(self.v)))

    def pieces(self) -> Iterator[Piece]:
        """Pieces of every cell in row-major order"""
        flat = self.flat
        for north, east, south, west in piece_edge_indices(self.n):
            yield Piece(flat[north], flat[east], flat[south], flat[west])

    def serialize(self) -> Tuple[int, ...]:
        """Row-major concatenation of the cells' (N, E, S, W) tuples"""
        flat = self.flat
        return tuple(flat[i] for i in _serialization_permutations(self.n)[0])


def piece_at(c: EdgeColoring, row: int, col: int) -> Piece:
    """Piece cut from cell (row, col)"""
    if not (0 <= row < c.n and 0 <= col < c.n):
        raise InvalidPuzzleError("cell", f"({row}, {col}) outside the {c.n}x{c.n} board")
    return Piece(c.h[row][col], c.v[row][col + 1], c.h[row + 1][col], c.v[row][col])


def rotate_coloring(c: EdgeColoring, quarter_turns: int) -> EdgeColoring:
    """Rotate the whole board clockwise by 90 degrees times ``quarter_turns``"""
    k = quarter_turns % 4
    if k == 0:
        return c
    flat = c.flat
    perm = rotation_permutations(c.n)[k]
    return EdgeColoring.from_flat(c.n, c.q, [flat[i] for i in perm])


def _rotation_keys(c: EdgeColoring) -> List[Tuple[int, ...]]:
    flat = c.flat
    return [tuple(flat[i] for i in perm) for perm in _serialization_permutations(c.n)]


def canonical_rotation(c: EdgeColoring) -> int:
    """Smallest number of quarter turns giving the lex-min serialization"""
    keys = _rotation_keys(c)
    return min(range(4), key=lambda k: (keys[k], k))


def canonical_coloring(c: EdgeColoring) -> EdgeColoring:
    """Representative of c's board-rotation class"""
    return rotate_coloring(c, canonical_rotation(c))


def canonical_key(c: EdgeColoring, model: ModelVariant) -> Tuple[int, ...]:
    """Hashable class key: lex-min serialization (rot) or the serialization itself (fixed)"""
    if ModelVariant.parse(model).rotations:
        return min(_rotation_keys(c))
    return c.serialize()


def symmetry_order(c: EdgeColoring) -> int:
    """Number of quarter turns (out of 4) that fix the coloring: 1, 2 or 4"""
    keys = _rotation_keys(c)
    return sum(1 for key in keys if key == keys[0])


# ---------------------------------------------------------------------------
# Pieces
# ---------------------------------------------------------------------------

def rotate_piece(p: Piece, quarter_turns: int = 1) -> Piece:
    """Clockwise rotation: (N, E, S, W) -> (W, N, E, S) per quarter turn"""
    edges = tuple(p)
    k = quarter_turns % 4
    return Piece(*(edges[(i - k) % 4] for i in range(4)))


def piece_rotations(p: Piece) -> List[Piece]:
    """Distinct rotations of a piece, in order of quarter turns"""
    seen = []
    for k in range(4):
        rotated = rotate_piece(p, k)
        if rotated not in seen:
            seen.append(rotated)
    return seen


def canonicalize_piece(p) -> CanonicalPiece:
    p = Piece(*p)
    rotations = piece_rotations(p)
    # bypass __post_init__ re-canonicalization
    canonical = object.__new__(CanonicalPiece)
    object.__setattr__(canonical, "edges", min(rotations))
    object.__setattr__(canonical, "orbit", len(rotations))
    return canonical


def piece_type_census(q: int) -> PieceCensus:
    """Number of piece types with r(J) = 1, 2, 4 and in total"""
    if q < 1:
        raise ValueError(f"q: must be >= 1, got {q}")
    r1 = q
    r2 = q * (q - 1) // 2
    r4 = (q ** 4 - q ** 2) // 4
    return PieceCensus(r1, r2, r4, r1 + r2 + r4)


def burnside_type_count(q: int) -> int:
    """Necklaces of length 4 over q colors under rotation"""
    return (q ** 4 + q ** 2 + 2 * q) // 4


def expected_multiplicity(r: int, n: int, q: int) -> float:
    """E[X_J] = r(J) n^2 / q^4 for a uniformly colored board"""
    if r not in (1, 2, 4):
        raise ValueError(f"r: orbit size must be 1, 2 or 4, got {r}")
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    return r * n * n / q ** 4


# ---------------------------------------------------------------------------
# Piece bag (the BOX)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PieceBag:
    """Multiset of piece types X_J; keys are canonical pieces (rot) or raw pieces (fixed)"""

    n: int
    q: int
    model: ModelVariant
    items: Tuple[Tuple[Piece, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "model", ModelVariant.parse(self.model))
        merged: Dict[Piece, int] = {}
        for piece, count in self.items:
            piece = Piece(*piece)
            if any(not 0 <= color < self.q for color in piece):
                raise InvalidBagError(f"piece {tuple(piece)} has a color outside [0, {self.q})")
            if self.model.rotations and canonicalize_piece(piece).edges != piece:
                raise InvalidBagError(f"piece {tuple(piece)} is not canonical under rotation")
            if count <= 0:
                raise InvalidBagError(f"piece {tuple(piece)} has non-positive count {count}")
            merged[piece] = merged.get(piece, 0) + count
        object.__setattr__(self, "items", tuple(sorted(merged.items())))

    @classmethod
    def from_counts(cls, n: int, q: int, model, counts: Mapping) -> "PieceBag":
        return cls(n, q, ModelVariant.parse(model), tuple(counts.items()))

    @property
    def counts(self) -> Dict[Piece, int]:
        return dict(self.items)

    @property
    def mass(self) -> int:
        return sum(count for _, count in self.items)

    @property
    def has_duplicates(self) -> bool:
        return any(count > 1 for _, count in self.items)

    def validate(self) -> None:
        """Raise InvalidBagError unless the bag fills the n x n board exactly"""
        if self.mass != self.n * self.n:
            raise InvalidBagError(f"bag holds {self.mass} pieces, board needs {self.n * self.n}")


def extract_bag(c: EdgeColoring, model) -> PieceBag:
    """The BOX of a coloring: counts of canonical (rot) or raw (fixed) pieces"""
    model = ModelVariant.parse(model)
    if model.rotations:
        counts = Counter(canonicalize_piece(p).edges for p in c.pieces())
    else:
        counts = Counter(c.pieces())
    return PieceBag(c.n, c.q, model, tuple(counts.items()))
