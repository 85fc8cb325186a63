"""latentprobe-bridge: execute interpolation plans against real models.

Reads plan JSON, drives a TorchScript generator and a VGG-16 feature trunk,
and emits image files plus FVEC feature matrices — the toolkit's wire formats.
"""

from .errors import BridgeError, DimensionError, FormatError, ImageError
from .features import LAYER_CUTOFFS, build_trunk, extract_features
from .generate import generate, load_generator
from .pixels import export_pixels
from .wire import WirePlan, WirePoint, read_plan, tri_center_index, write_fvec

__version__ = "0.1.0"
