"""Exception hierarchy shared by all stirling modules."""


class StirlingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StirlingError):
    """Argument outside the mathematical domain of the operation."""


class PrecisionError(StirlingError):
    """Precision context unusable (too few bits, corrupted trust root)."""


class ResourceError(StirlingError):
    """Request exceeds a configured table/size cap."""


class ValidityError(StirlingError):
    """Index below the stated validity range of an inequality family."""


class InconclusiveError(StirlingError):
    """Margin smaller than the arithmetic error envelope; no verdict."""


class ConvergenceError(StirlingError):
    """Iterative scheme failed to reach the requested accuracy in budget."""
