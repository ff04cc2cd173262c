"""Exception hierarchy for realized_cumulants."""


class RealizedCumulantsError(Exception):
    """Base class for all package errors."""


class CapacityError(RealizedCumulantsError, ValueError):
    """Requested order or enumeration size exceeds the configured capacity."""


class ModelError(RealizedCumulantsError, ValueError):
    """A model definition is inconsistent (bad probabilities, shapes...)."""


class PathParseError(RealizedCumulantsError, ValueError):
    """A path CSV file violates the long-format schema."""
