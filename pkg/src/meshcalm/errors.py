"""Exception types shared across the toolkit."""


class MeshcalmError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgumentError(MeshcalmError, ValueError):
    """Input violates an operation's contract."""


class NotFoundError(MeshcalmError, LookupError):
    """Referenced entity does not belong to the given structure."""


class TooLargeError(MeshcalmError):
    """Requested search space exceeds the configured cap."""


class CorrectionFailureError(MeshcalmError):
    """Forward correction cannot repair a disrupted edge."""

    def __init__(self, edge: tuple[int, int], message: str = ""):
        self.edge = edge
        super().__init__(message or f"no feasible channel swap for edge {edge}")


class ParseError(MeshcalmError, ValueError):
    """Input file failed to parse or violates its schema."""


class UnboundedProblemError(MeshcalmError):
    """Linear program is unbounded (cannot happen for capacity problems)."""
