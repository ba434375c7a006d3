"""Exceptions shared across modules."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size limit."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: {needed} items needed, budget is {budget}")
        self.what, self.needed, self.budget = what, needed, budget


class DimensionSolveError(RuntimeError):
    """The truncated determinant has no usable sign change in the search bracket."""
