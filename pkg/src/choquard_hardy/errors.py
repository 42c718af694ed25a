"""Exception types shared across the package."""


class ChoquardHardyError(Exception):
    """Base class for all library errors."""


class DomainError(ChoquardHardyError):
    """A parameter violates its mathematical domain constraint."""

    def __init__(self, field: str, constraint: str):
        self.field = field
        self.constraint = constraint
        super().__init__(f"{field}: {constraint}")


class ValidationError(ChoquardHardyError):
    """Aggregate of every violated constraint found while validating input."""

    def __init__(self, violations: list[DomainError]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class NoRealRoots(ChoquardHardyError):
    """The decay-exponent equation has no real solutions (mu above the Hardy constant)."""


class QuadratureFailure(ChoquardHardyError):
    """Adaptive quadrature could not reach the requested tolerance."""


class SingularPointError(ChoquardHardyError):
    """Finite differencing detected a non-smooth point and refuses to return a value."""


class EmptyInterval(ChoquardHardyError):
    """The exponent-selection interval is empty; inconsistent with an Exists verdict."""


class BudgetExhausted(ChoquardHardyError):
    """A geometric parameter search ran out of its iteration budget."""
