"""Exception hierarchy shared by all wattagent modules."""


class WattAgentError(Exception):
    """Base class for every error raised deliberately by wattagent."""


class ValidationError(WattAgentError, ValueError):
    """An input violates a documented invariant."""


class ConfigurationError(WattAgentError):
    """A configuration file, asset or reference cannot be resolved."""


class ParseError(ValidationError):
    """A document could not be parsed at all."""


class TransparencyError(WattAgentError):
    """A profile without provenance was about to be reported."""


class UnknownRegionError(WattAgentError, LookupError):
    def __init__(self, region, available):
        self.region = region
        self.available = sorted(available)
        super().__init__(
            f"unknown region {region!r}; available: {', '.join(self.available)}"
        )
