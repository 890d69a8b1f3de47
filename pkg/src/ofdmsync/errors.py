"""Exception types shared across the package."""


class OfdmSyncError(Exception):
    """Base class for all ofdmsync errors."""


class SizingError(OfdmSyncError, ValueError):
    """An input buffer, window, or transform length is the wrong size."""


class ConfigError(OfdmSyncError, ValueError):
    """A configuration object, flag, or plan file is invalid."""


class IqFormatError(OfdmSyncError, ValueError):
    """An IQ or CSV sample file does not match the expected layout."""


class EstimationError(OfdmSyncError, RuntimeError):
    """An estimator has no defined answer for the given input."""
