"""Exception types shared across the package."""


class UnsupportedModeError(Exception):
    """Requested detector mode does not exist for the scheme."""


class SearchFailure(Exception):
    """A target-BER search could not bracket the requested operating point."""


class ConfigError(Exception):
    """A run configuration is malformed or incomplete."""


class ValidationFailure(Exception):
    """An oracle-suite residual exceeded its tolerance."""
