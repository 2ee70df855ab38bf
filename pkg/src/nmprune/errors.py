"""Exception hierarchy shared across the toolkit."""


class NMPruneError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(NMPruneError):
    """A container or sidecar file does not conform to the on-disk format."""


class IoError(NMPruneError):
    """A file could not be written."""


class InvariantError(NMPruneError):
    """A value violates the invariants of its type."""


class ShapeError(NMPruneError):
    """Array dimensions are incompatible with the requested operation."""


class ConfigError(NMPruneError):
    """Invalid pruning configuration or command options."""


class ZeroRowError(NMPruneError):
    """A weight row is entirely zero, so row-relative scores are undefined."""

    def __init__(self, row: int):
        super().__init__(f"row {row} is entirely zero")
        self.row = row


class ZeroColumnError(NMPruneError):
    """A weight column is entirely zero, so column-relative scores are undefined."""

    def __init__(self, col: int):
        super().__init__(f"column {col} is entirely zero")
        self.col = col


class DomainError(NMPruneError):
    """Inputs lie outside the mathematical domain of the operation."""


class VerificationError(NMPruneError):
    """A mask failed a structural check."""


class CapacityError(NMPruneError):
    """Instance too large for exhaustive enumeration."""


class DegenerateError(NMPruneError):
    """A normalizing quantity is zero, so the result is undefined."""
