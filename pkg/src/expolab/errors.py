"""Exception hierarchy shared by all expolab modules."""


class ExpolabError(Exception):
    """Base class for library errors."""


class BesselDomainError(ExpolabError, ValueError):
    """Argument outside the range where J_nu is evaluated to full accuracy."""


class ZeroTableError(ExpolabError):
    """A zero table could not be built or failed validation."""


class OutOfRangeError(ExpolabError, ValueError):
    """Query beyond the span of a zero table."""


class TableCoverageError(ExpolabError):
    """The zero table does not reach the radii a computation needs."""


class DimensionMismatchError(ExpolabError, ValueError):
    pass


class DegenerateConfigurationError(ExpolabError, ValueError):
    """Difference vectors are not linearly independent."""


class ResourceLimitError(ExpolabError):
    """A search grid would exceed the configured cell budget."""


class ConstructionError(ExpolabError):
    """An explicit construction failed to produce a verified witness."""
