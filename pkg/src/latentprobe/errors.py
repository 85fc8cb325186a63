"""Exception types shared across the toolkit.

File-system problems (missing paths, unwritable targets) surface as the
builtin OSError family; everything domain-specific derives from
LatentProbeError so callers can catch one base class.
"""


class LatentProbeError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionError(LatentProbeError):
    """Vector lengths or matrix dimensions do not agree."""


class ShapeError(LatentProbeError):
    """Conditioning tensors are not shape-compatible."""


class PlanSizeError(LatentProbeError):
    """An interpolation plan needs at least two steps."""


class DegenerateTrainingError(LatentProbeError):
    """Training data does not contain both classes."""


class ConvergenceError(LatentProbeError):
    """The solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, final_objective: float):
        super().__init__(message)
        self.final_objective = float(final_objective)


class SplitError(LatentProbeError):
    """Manifest split counts differ from the expected dataset layout."""


class ParseError(LatentProbeError):
    """A JSON manifest, label map, or corner file is malformed."""


class FormatError(LatentProbeError):
    """A binary or JSON artifact violates its format contract."""


class RangeError(LatentProbeError):
    """A count or size exceeds the format's representable range."""
