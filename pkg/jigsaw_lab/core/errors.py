"""
Exceptions raised by the jigsaw laboratory
"""
from typing import Optional


class JigsawLabError(Exception):
    """Base class for all laboratory errors"""


class InvalidPuzzleError(JigsawLabError, ValueError):
    """A coloring, piece or puzzle file violates the model"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidBagError(JigsawLabError, ValueError):
    """A piece bag is not a valid box for its board"""


class OutOfRegimeError(JigsawLabError, ValueError):
    """A leading-order formula was evaluated outside its hypothesis"""


class BudgetExceededError(JigsawLabError, RuntimeError):
    """An exhaustive computation would exceed its configured budget"""

    def __init__(self, what: str, required: int, budget: Optional[int]):
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: needs {required} steps, budget is {budget}")
