"""Exception hierarchy shared by every stage of the chain."""


class DvbtsimError(Exception):
    """Base class for all package errors."""


class SizingError(DvbtsimError, ValueError):
    """An input block has a length the operation cannot accept."""


class ParameterError(DvbtsimError, ValueError):
    """A numeric parameter is outside its valid domain."""


class DecodeFailure(DvbtsimError):
    """The Reed-Solomon decoder detected an uncorrectable codeword."""


class ConfigError(DvbtsimError):
    """Invalid scenario configuration.

    ``path`` names the offending field, dotted (``channel.noise_value_db``).
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
