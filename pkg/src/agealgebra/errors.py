"""Exception types shared across the package."""


class AgeAlgebraError(Exception):
    pass


class ValidationError(AgeAlgebraError, ValueError):
    """Malformed input: bad tuples, signature mismatch, bad vectors."""


class CapExceededError(AgeAlgebraError):
    """A configured size cap would be exceeded (exponential enumeration)."""


class InternalInconsistencyError(AgeAlgebraError, RuntimeError):
    """Two routes that must agree did not; this is a bug, not bad input."""


class NotStabilizedError(AgeAlgebraError):
    """Window decompositions did not stabilize within the requested bound."""
