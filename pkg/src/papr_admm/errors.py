"""Exception types shared across the package."""


class InputShapeError(ValueError):
    """An array has the wrong length or shape for the operation."""


class DegenerateInputError(ValueError):
    """The input makes the quantity undefined (e.g. an all-zero signal)."""


class UnsupportedLengthError(ValueError):
    """Transform length is not a power of two."""


class ConfigError(Exception):
    """Base class for configuration problems."""


class ConfigFileNotFoundError(ConfigError):
    pass


class ConfigSyntaxError(ConfigError):
    pass


class ConfigValueError(ConfigError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
