"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """Requested truncated space is too large, or a cutoff search did not converge."""


class ScenarioError(ValueError):
    """Scenario set-up violates a precondition (e.g. couplings do not commute)."""


class NumericError(ArithmeticError):
    """A numerical kernel (eigensolver, series) failed."""
