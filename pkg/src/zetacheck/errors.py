"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain of the operation."""


class UnsupportedOperationError(ValueError):
    """The operation is not defined for this root-system family."""


class DiscrepancyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


class ScanInterrupted(RuntimeError):
    """A checkpointed scan stopped before completing all prefix tasks."""
