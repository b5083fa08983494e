"""Exception hierarchy shared by all camv modules."""


class CamvError(Exception):
    """Base class for every error raised by this package."""

    code = "camv_error"


class DomainError(CamvError, ValueError):
    """An input lies outside the mathematical domain of an operation."""

    code = "domain_error"


class ArgumentError(CamvError, ValueError):
    """Arguments are inconsistent with each other (sizes, ordering, counts)."""

    code = "argument_error"


class GeometryError(CamvError, ValueError):
    """A parameter set cannot be turned into valid geometry."""

    code = "geometry_error"


class PatternFormatError(CamvError, ValueError):
    """A pattern file does not follow the CSV schema."""

    code = "format_error"

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DegeneratePatternError(CamvError, ValueError):
    code = "degenerate_pattern"


class AccuracyError(CamvError, ValueError):
    """The sampling grid is too coarse for a trustworthy result."""

    code = "accuracy_error"


class ConfigError(CamvError, ValueError):
    """Invalid scenario or parameter file; ``path`` is a JSON path like ``$.array.rows``."""

    code = "config_error"

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
