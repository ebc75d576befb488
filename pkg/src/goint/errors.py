"""Exception types shared across the package."""


class GointError(Exception):
    """Base class for all library errors."""


class ConstructionError(GointError):
    """A value failed its construction preconditions (bad parameters, bad table, ...)."""


class IncompleteTableError(ConstructionError):
    """A table capacity is missing one or more subset entries."""


class ConfigurationError(GointError):
    """An integral was configured with an inadmissible operator."""
