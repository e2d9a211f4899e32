"""Exception hierarchy shared across the package."""


class DdtError(Exception):
    """Base class for all package errors."""


class ValidationError(DdtError, ValueError):
    """Invalid data or arguments: bad shapes, non-finite values, bad manifests."""


class DescriptorFormatError(DdtError, ValueError):
    """Malformed descriptor file: bad magic, unsupported version, corrupt header."""


class TruncatedPayloadError(DescriptorFormatError):
    """Descriptor file ends before the payload declared by its header."""


class DimensionMismatchError(ValidationError):
    """Descriptor dimensionality differs between grids that must share it."""


class DegenerateSpectrumError(DdtError):
    """Leading eigenvalues too close (or spectrum empty) to define a stable direction.

    ``gap`` carries the offending relative eigenvalue gap when one exists.
    """

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
