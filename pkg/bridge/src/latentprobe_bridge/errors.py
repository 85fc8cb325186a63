"""Bridge-side error types; names mirror the toolkit's error vocabulary."""


class BridgeError(Exception):
    """Base class for bridge domain errors."""


class DimensionError(BridgeError):
    """Plan tensors do not match what the generator or extractor expects."""


class FormatError(BridgeError):
    """A plan, manifest, or metadata document violates its format contract."""


class ImageError(BridgeError):
    """An image file could not be decoded."""
