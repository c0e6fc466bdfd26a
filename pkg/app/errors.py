class DecompositionError(Exception):
    """Base class for every error raised by the decomposition library."""


class ImageFormatError(DecompositionError):
    """An image or coefficient file is malformed or uses an unsupported format."""


class DimensionError(DecompositionError):
    """Array shapes are inconsistent or not divisible as a kernel requires."""


class NumericalError(DecompositionError):
    """A NaN or infinite value appeared in a computed component."""
