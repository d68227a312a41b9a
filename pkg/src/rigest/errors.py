"""Exception hierarchy shared by every module of the package."""


class RigError(Exception):
    """Base class for all errors raised by rigest."""


class InvalidParameterError(RigError, ValueError):
    """A parameter lies outside the domain of an operation."""


class UnknownMotifError(InvalidParameterError):
    """A motif name is not part of the catalog."""


class ResourceLimitError(RigError):
    """A computation would exceed a configured size budget."""


class CapExceededError(ResourceLimitError):
    """A brute-force routine was asked to handle a graph above its cap."""


class FormatError(RigError, ValueError):
    """Malformed edge-list, attribute-list or node-list input."""


class ConfigError(RigError, ValueError):
    """Invalid experiment configuration.

    ``line`` is the 1-based line of the offending entry when the
    configuration came from a file; ``field`` names the config field at fault.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        self.message = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
