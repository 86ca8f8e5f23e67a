"""Exception types shared across the package."""


class ResourceError(RuntimeError):
    """A computation would exceed its configured size budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DegenerateSampleError(ValueError):
    """Random break points produced a zero-length spacing."""


class BoundViolation(AssertionError):
    """A proven inequality failed numerically."""
