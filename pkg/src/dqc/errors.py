"""Exception hierarchy shared by every stage of the pipeline."""


class DqcError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(DqcError, ValueError):
    """Input data violates a structural invariant."""


class ConfigError(DqcError, ValueError):
    """Parameters are inconsistent (e.g. infeasible balance, wrong k)."""


class RewriteError(DqcError):
    """A circuit rewrite left gates it could not eliminate."""


class LimitError(DqcError):
    """A configured size, node or time limit was exceeded."""


class InvariantViolation(DqcError, AssertionError):
    """A result broke a guarantee the pipeline is supposed to uphold."""
