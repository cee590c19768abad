"""
Vectorized encoding of many colorings at once

A batch of colorings is an (m, 2n(n+1)) integer array in flattened edge order.
Coloring number ``k`` of the full space has digit ``i`` (base q) equal to the
color of edge ``i``, so enumerating ``range(q ** E)`` visits every coloring once.
"""
from typing import Iterator, Tuple

import numpy as np

from .model import ModelVariant, edge_count, piece_edge_indices, rotation_permutations


class BatchEncoder:
    """Piece codes, piece types, bags and symmetries for batches of colorings"""

    def __init__(self, n: int, q: int, model=ModelVariant.ROTATIONS_ALLOWED):
        self.n = n
        self.q = q
        self.model = ModelVariant.parse(model)
        self.edges = edge_count(n)
        self.cells = n * n
        self.piece_index = np.array(piece_edge_indices(n), dtype=np.int64)
        self.rotation_perms = np.array(rotation_permutations(n), dtype=np.int64)

        q4 = q ** 4
        codes = np.arange(q4, dtype=np.int64)
        north, east, south, west = codes // q ** 3, codes // q ** 2 % q, codes // q % q, codes % q
        rotations = np.stack([
            codes,
            ((west * q + north) * q + east) * q + south,
            ((south * q + west) * q + north) * q + east,
            ((east * q + south) * q + west) * q + north,
        ])
        self.canonical_code = rotations.min(axis=0)
        sorted_rotations = np.sort(rotations, axis=0)
        self.orbit = 1 + (np.diff(sorted_rotations, axis=0) != 0).sum(axis=0)

        if self.model.rotations:
            self.type_codes = np.unique(self.canonical_code)
        else:
            self.type_codes = codes
        self.type_index = np.full(q4, -1, dtype=np.int64)
        self.type_index[self.type_codes] = np.arange(len(self.type_codes))
        if self.model.rotations:
            self.type_orbit = self.orbit[self.type_codes]
        else:
            self.type_orbit = np.ones(len(self.type_codes), dtype=np.int64)

    @property
    def type_count(self) -> int:
        return len(self.type_codes)

    def total_colorings(self) -> int:
        return self.q ** self.edges

    def type_tuple(self, type_id: int) -> Tuple[int, int, int, int]:
        code = int(self.type_codes[type_id])
        q = self.q
        return (code // q ** 3, code // q ** 2 % q, code // q % q, code % q)

    def type_id_of(self, piece) -> int:
        north, east, south, west = piece
        code = ((north * self.q + east) * self.q + south) * self.q + west
        return int(self.type_index[code])

    def colorings(self, start: int, stop: int) -> np.ndarray:
        """Colorings number start..stop-1 of the full enumeration"""
        index = np.arange(start, stop, dtype=np.int64)
        weights = self.q ** np.arange(self.edges, dtype=np.int64)
        return (index[:, None] // weights[None, :]) % self.q

    def iter_chunks(self, chunk: int) -> Iterator[np.ndarray]:
        total = self.total_colorings()
        for start in range(0, total, chunk):
            yield self.colorings(start, min(start + chunk, total))

    def piece_codes(self, colors: np.ndarray) -> np.ndarray:
        """(m, n^2) codes N q^3 + E q^2 + S q + W of every cell"""
        q = self.q
        pieces = colors[:, self.piece_index]
        return ((pieces[..., 0] * q + pieces[..., 1]) * q + pieces[..., 2]) * q + pieces[..., 3]

    def type_ids(self, colors: np.ndarray) -> np.ndarray:
        codes = self.piece_codes(colors)
        if self.model.rotations:
            codes = self.canonical_code[codes]
        return self.type_index[codes]

    @staticmethod
    def bag_rows(type_ids: np.ndarray) -> np.ndarray:
        """Sorted type ids per coloring: equal rows iff equal bags"""
        return np.sort(type_ids, axis=1)

    def multiplicities(self, type_ids: np.ndarray) -> np.ndarray:
        """(m, types) matrix of X_J per coloring"""
        m = type_ids.shape[0]
        flat = type_ids + self.type_count * np.arange(m, dtype=np.int64)[:, None]
        counts = np.bincount(flat.ravel(), minlength=m * self.type_count)
        return counts.reshape(m, self.type_count)

    def stabilizers(self, colors: np.ndarray) -> np.ndarray:
        """Number of quarter turns fixing each coloring (1, 2 or 4)"""
        fixed = np.ones(colors.shape[0], dtype=np.int64)
        for perm in self.rotation_perms[1:]:
            fixed += np.all(colors[:, perm] == colors, axis=1)
        return fixed
