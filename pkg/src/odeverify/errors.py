"""Exception hierarchy shared by the library, the service, and the CLI.

``UsageError`` and ``ConfigurationError`` map to process exit code 2 and
HTTP 400; everything computes or fails loudly, nothing is silently coerced.
"""


class OdeVerifyError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(OdeVerifyError):
    """An operation was called with arguments that violate its contract
    (dimension mismatch, non-finite state, mismatched trajectories, ...)."""


class ConfigurationError(OdeVerifyError):
    """A run configuration is internally inconsistent, e.g. the output
    interval is not an integer multiple of the step size."""


class NoExactSolutionError(OdeVerifyError):
    """The model has no attached closed-form solution."""


class UnsupportedDimensionError(OdeVerifyError):
    """Closed-form eigenvalue extraction is only implemented for n <= 3."""


class InsufficientDataError(OdeVerifyError):
    """A fit or estimate was requested on fewer usable samples than the
    operation requires."""
