"""
Render edge colorings as images
"""
from typing import List, Tuple

from PIL import Image, ImageColor, ImageDraw

from ..config.settings import Config
from ..core.model import EdgeColoring, piece_at


class PuzzleRenderer:
    """Draws every piece as four triangles, one per edge, filled with the edge's color"""

    def __init__(self, cell_size: int = Config.DEFAULT_CELL_SIZE, gap: int = 2,
                 background: str = "white"):
        """
        Initialize renderer

        Args:
            cell_size: Side of one piece in pixels
            gap: Spacing between pieces in pixels
            background: Background color name
        """
        if cell_size < 4:
            raise ValueError(f"cell_size: must be >= 4, got {cell_size}")
        self.cell_size = cell_size
        self.gap = gap
        self.background = background

    @staticmethod
    def palette(q: int) -> List[Tuple[int, int, int]]:
        """q well-separated colors around the hue circle"""
        return [ImageColor.getrgb(f"hsv({int(360 * k / q)}, 70%, 90%)") for k in range(q)]

    def render(self, coloring: EdgeColoring) -> Image.Image:
        n = coloring.n
        step = self.cell_size + self.gap
        size = n * step + self.gap
        image = Image.new("RGB", (size, size), color=self.background)
        draw = ImageDraw.Draw(image)
        colors = self.palette(coloring.q)

        for r in range(n):
            for c in range(n):
                left = self.gap + c * step
                top = self.gap + r * step
                right = left + self.cell_size - 1
                bottom = top + self.cell_size - 1
                center = ((left + right) / 2, (top + bottom) / 2)
                piece = piece_at(coloring, r, c)
                triangles = [
                    (piece.north, [(left, top), (right, top), center]),
                    (piece.east, [(right, top), (right, bottom), center]),
                    (piece.south, [(right, bottom), (left, bottom), center]),
                    (piece.west, [(left, bottom), (left, top), center]),
                ]
                for color, points in triangles:
                    draw.polygon(points, fill=colors[color], outline="black")
        return image

    def save(self, coloring: EdgeColoring, path: str) -> str:
        self.render(coloring).save(path)
        return path
