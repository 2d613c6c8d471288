"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation problems exit 2,
precision/resource exhaustion exits 3, verification failures exit 1.
"""


class GiwaError(Exception):
    """Base class for all package errors."""


class ValidationError(GiwaError):
    """Malformed input: bad graph spec, dangling endpoint, non-morphism, ..."""


class DisconnectedError(GiwaError):
    """An operation that requires a connected graph was given a disconnected one."""


class PrecisionError(GiwaError):
    """Truncation too short to certify the requested quantity."""


class ResourceLimitError(GiwaError):
    """A configured enumeration or size cap was exceeded."""


class UnsupportedError(GiwaError):
    """Input outside the supported fragment (non-abelian characters, ell = 2 for SL2, ...)."""
