"""Exception types shared across the package."""


class EditSpanError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(EditSpanError):
    """Bad configuration: unknown provider, malformed weights file, bad option."""


class DataError(EditSpanError):
    """Malformed input data, or a contract violation between data artifacts."""
