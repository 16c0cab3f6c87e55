"""Exception taxonomy for the solver.

Every error raised on purpose by this package derives from HermsolveError, so
callers can catch the package's failures without masking genuine bugs.
"""


class HermsolveError(Exception):
    """Base class for all errors raised by hermsolve."""


class ParameterError(HermsolveError, ValueError):
    """A constructor or operation argument violates its contract."""


class InputError(HermsolveError, ValueError):
    """Numerical input data is malformed (non-finite, wrong shape)."""


class CapabilityError(HermsolveError):
    """The request is valid but outside what double precision supports."""


class IntegrationError(HermsolveError):
    """A quadrature evaluation produced a non-finite value."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class SolverError(HermsolveError):
    """A linear solve failed (singular or numerically unusable system)."""


class DivergenceError(HermsolveError):
    """A time integration blew up; carries the step index and time."""

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time
