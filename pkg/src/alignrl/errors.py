"""Shared exception types.

Every subsystem raises one of these so callers (and the CLI) can map
failures to exit codes without string matching.
"""


class AlignRLError(Exception):
    """Base class for all package errors."""


class DimensionError(AlignRLError, ValueError):
    """Tensor/array shapes are incompatible for the requested operation."""


class ContractError(AlignRLError, RuntimeError):
    """A documented precondition was violated by the caller."""


class ConfigError(AlignRLError, ValueError):
    """Invalid or unknown configuration (bad key, bad range, unknown env)."""


class CapacityError(AlignRLError, RuntimeError):
    """A buffer or search space is too small/large for the request."""


class DegenerateInputError(AlignRLError, ValueError):
    """Numerically degenerate input (e.g. normalizing a near-zero vector)."""


class CheckpointFormatError(AlignRLError, RuntimeError):
    """Checkpoint file is corrupt, truncated, or has a bad magic."""


class UnsupportedVersionError(CheckpointFormatError):
    """Checkpoint format version is not supported by this build."""
