"""Exception types shared across the package."""


class QuadstabError(Exception):
    """Base class for all package-level errors."""


class DomainError(QuadstabError):
    """A point or parameter lies outside the declared domain."""


class EscapeError(QuadstabError):
    """An orbit left the invariant interval; carries the escape index."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"orbit left the invariant interval at step {index}")


class CapExceeded(QuadstabError):
    """An iteration or classification cap was hit; carries the cap."""

    def __init__(self, cap, message=None):
        self.cap = cap
        super().__init__(message or f"cap of {cap} iterations exceeded")


class NoConvergence(QuadstabError):
    """A series or fixed-point iteration failed to converge."""


class NotPreperiodic(QuadstabError):
    """The critical orbit does not land on a repelling cycle."""


class NoRootFound(QuadstabError):
    """A parameter root scan found no sign change in range."""


class ClearanceFailed(QuadstabError):
    """Every candidate root violates the near-critical avoidance window."""


class NewtonDiverged(QuadstabError):
    """Newton continuation left its monotone branch or failed to converge."""


class ConstructionFailed(QuadstabError):
    """No admissible preperiodic endpoints found at the requested scale."""


class NoCentralBranch(QuadstabError):
    """No branch of the first return map contains the critical point."""


class MethodUnavailable(QuadstabError):
    """The requested method does not apply to this family or base."""


class ContractViolation(QuadstabError):
    """An induced-map contract condition failed; carries cell and condition."""

    def __init__(self, cell, condition, message=None):
        self.cell = cell
        self.condition = condition
        super().__init__(message or f"cell {cell} violates condition {condition!r}")
