"""Exception types shared across the package."""


class CflabError(Exception):
    """Base class for all cflab errors."""


class CatalogError(CflabError):
    """Invalid exponent list or sequence specification."""


class CertificationError(CflabError):
    """An interval is too wide to certify any partial quotient."""


class PrecisionError(CflabError):
    """A requested precision is not certified by the available data."""


class CheckpointError(CflabError):
    """A checkpoint file is corrupt or version-incompatible."""


class ConfigError(CflabError):
    """Invalid run configuration."""
