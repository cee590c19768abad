"""
Uniform random puzzle generator
"""
import json
import logging
import os
from typing import List, Dict, Any, Optional, Union

import numpy as np
from tqdm import tqdm

from ..core.errors import InvalidPuzzleError
from ..core.model import EdgeColoring, ModelVariant, edge_count
from ..utils.helpers import PuzzleIO, derive_seed, make_rng


def generate_puzzle(n: int, q: int, seed: Union[int, np.random.Generator, None]) -> EdgeColoring:
    """
    Draw every one of the 2n(n+1) edges i.i.d. uniform on [0, q)

    Args:
        n: Board side
        q: Number of colors
        seed: Stream seed (or an existing Generator)

    Returns:
        The puzzle's edge coloring; identical (n, q, seed) give identical output
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidPuzzleError("n", f"board side must be >= 1, got {n!r}")
    if not isinstance(q, int) or q < 1:
        raise InvalidPuzzleError("q", f"color count must be >= 1, got {q!r}")
    rng = make_rng(seed)
    colors = rng.integers(0, q, size=edge_count(n), dtype=np.int64)
    return EdgeColoring.from_flat(n, q, colors.tolist())


class PuzzleGenerator:
    """Generates seeded random puzzles, one at a time or as a file batch"""

    def __init__(self, n: int, q: int, model: Union[ModelVariant, str] = ModelVariant.ROTATIONS_ALLOWED):
        """
        Initialize generator

        Args:
            n: Board side
            q: Number of colors
            model: Orientation model written into puzzle files
        """
        self.n = n
        self.q = q
        self.model = ModelVariant.parse(model)
        self.logger = logging.getLogger(self.__class__.__name__)

    def generate(self, seed) -> EdgeColoring:
        return generate_puzzle(self.n, self.q, seed)

    def generate_batch(self,
                       count: int,
                       output_dir: str,
                       master_seed: int = 0,
                       name_prefix: str = "puzzle",
                       save_labels: bool = True,
                       renderer=None,
                       progress: bool = True) -> List[Dict[str, Any]]:
        """
        Generate a batch of puzzle files

        Args:
            count: Number of puzzles
            output_dir: Directory to write the JSON files into
            master_seed: Seed from which every puzzle's stream seed is derived
            name_prefix: Prefix for puzzle filenames
            save_labels: Whether to write a labels.json index
            renderer: Optional PuzzleRenderer; a PNG is written next to each puzzle
            progress: Show a progress bar

        Returns:
            List of puzzle metadata
        """
        os.makedirs(output_dir, exist_ok=True)
        samples = []

        self.logger.info(f"Generating {count} puzzles (n={self.n}, q={self.q})...")

        for i in tqdm(range(count), desc="Generating puzzles", disable=not progress):
            seed = derive_seed(master_seed, self.n, self.q, i)
            coloring = self.generate(seed)

            filename = f"{name_prefix}_{i:06d}.json"
            path = os.path.join(output_dir, filename)
            PuzzleIO.save(coloring, path, self.model)

            sample = {
                "filename": filename,
                "path": path,
                "seed": seed,
                "n": self.n,
                "q": self.q,
                "model": self.model.value,
            }
            if renderer is not None:
                image_path = os.path.splitext(path)[0] + ".png"
                renderer.render(coloring).save(image_path)
                sample["image"] = image_path
            samples.append(sample)

        if save_labels:
            labels_path = os.path.join(output_dir, "labels.json")
            with open(labels_path, 'w', encoding='utf-8') as f:
                json.dump(samples, f, indent=2)
            self.logger.info(f"Saved labels to {labels_path}")

        self.logger.info(f"Generated {len(samples)} puzzles in {output_dir}")
        return samples
