"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class FamilyMismatchError(ValueError):
    """Two distributions do not share the same standard family and shape."""


class ConvergenceError(RuntimeError):
    """Adaptive refinement gave up before meeting its tolerance.

    The best available estimate and its error estimate are kept on the
    exception so callers can decide whether they are good enough.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
