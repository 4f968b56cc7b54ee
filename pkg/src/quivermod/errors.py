"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class QuivermodError(ValueError):
    """Base class for every domain error raised by the library."""


class DimensionMismatch(QuivermodError):
    pass


class BadPrime(QuivermodError):
    def __init__(self, p: int, offending):
        self.p = p
        self.offending = list(offending)
        super().__init__(f"bad prime {p}: denominators divisible by {p} at {self.offending}")


class NotInvariant(QuivermodError):
    def __init__(self, arrow: str):
        self.arrow = arrow
        super().__init__(f"not invariant under arrow {arrow!r}")


class BudgetExceeded(QuivermodError):
    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"budget exceeded: enumeration size {size} > budget {budget}")


class NoLimit(QuivermodError):
    """The one-parameter subgroup has no limit on the given representation."""

    def __init__(self, arrow: str, source_weight: int, target_weight: int):
        self.arrow = arrow
        self.source_weight = source_weight
        self.target_weight = target_weight
        super().__init__(
            f"no limit: arrow {arrow!r} has a nonzero block from weight "
            f"{source_weight} to weight {target_weight}"
        )


class IrrationalSpectrum(QuivermodError):
    pass


class PreconditionFailed(QuivermodError):
    pass
