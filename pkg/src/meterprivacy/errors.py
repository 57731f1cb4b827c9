"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside its alphabet or violates a precondition."""


class ResourceError(RuntimeError):
    """An enumeration or support size exceeds its configured cap."""


class PolicyInfeasibleError(ValueError):
    """No block battery policy exists for the requested block length."""


class InvariantViolation(RuntimeError):
    """A guaranteed property failed to hold (indicates a bug or bad input map)."""
