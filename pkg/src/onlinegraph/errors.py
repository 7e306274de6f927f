"""Exception hierarchy shared by every module."""


class OnlineGraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(OnlineGraphError, ValueError):
    """Text could not be decoded as a graph."""


class MalformedHeaderError(GraphFormatError):
    pass


class EndpointRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


class SizeLimitError(OnlineGraphError, ValueError):
    """An input exceeds the configured size limit of an exact search."""


class BudgetExceededError(OnlineGraphError, RuntimeError):
    """The node budget of a game search was used up before it finished."""

    def __init__(self, budget):
        super().__init__(f"node budget of {budget} expanded states exhausted")
        self.budget = budget


class SetSystemError(OnlineGraphError, ValueError):
    """Invalid Maximum Online Set instance."""
