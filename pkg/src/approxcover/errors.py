"""Exception hierarchy shared by every module."""


class ApproxCoverError(Exception):
    """Base class for all library errors."""


class EmptySetError(ApproxCoverError, ValueError):
    """An algebraic operation received the empty set."""


class IntegerOverflow(ApproxCoverError, OverflowError):
    """A result would leave the signed 64-bit range."""


class InvalidFold(ApproxCoverError, ValueError):
    """Fold count h must be a positive integer."""


class InvalidSize(ApproxCoverError, ValueError):
    """The input set (or size parameter) is too small for the operation."""


class SetParseError(ApproxCoverError, ValueError):
    """A set literal could not be parsed."""


class NoStabilization(ApproxCoverError):
    """No structure constants were found inside the scanned window."""


class BudgetExceeded(ApproxCoverError):
    """The exact cover search ran past its node budget."""

    def __init__(self, nodes: int, budget: int):
        super().__init__(f"node budget exceeded: {nodes} nodes explored (budget {budget})")
        self.nodes = nodes
        self.budget = budget
