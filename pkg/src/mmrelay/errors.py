"""Exception types raised by the simulator."""


class ParameterError(ValueError):
    """An argument is outside its allowed range or otherwise malformed."""


class DomainError(ValueError):
    """A value lies outside the domain of a physical formula."""


class SizeError(ValueError):
    """An exhaustive computation would exceed its configuration budget."""


class ConfigError(ValueError):
    """A configuration file or flag could not be parsed."""
