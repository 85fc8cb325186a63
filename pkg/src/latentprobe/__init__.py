"""latentprobe: interpolation planning and Good/Bad latent-code gating.

The package splits into four layers that communicate by value or by file:

- interp/toygen: deterministic pairwise and triangular interpolation plans
  plus a seeded toy renderer for smoothness checks.
- svm/pca/rings: the Good/Bad classifier, its PCA baseline, and a synthetic
  benchmark where lifting the features makes a nonlinear problem linear.
- features: shared labeled/unlabeled feature containers.
- dataset_io: the FVEC binary container, plan JSON, manifests, label maps.
"""

from .errors import (
    ConvergenceError,
    DegenerateTrainingError,
    DimensionError,
    FormatError,
    LatentProbeError,
    ParseError,
    PlanSizeError,
    RangeError,
    ShapeError,
    SplitError,
)
from .features import (
    FeatureMatrix,
    LabeledFeatureSet,
    QualityLabel,
    l2_normalize,
    labeled_set,
)
from .interp import (
    ConditioningPair,
    InterpolationPlan,
    LatentCode,
    MixParams,
    PlanPoint,
    lerp_latent,
    lerp_linguistic,
    tri_center_index,
    tri_grid,
    tri_latent,
    tri_linguistic,
)
from .toygen import ToyGenParams, max_consecutive_delta, render_plan, toy_generate, toy_lipschitz_bound
from .svm import (
    EvalReport,
    RankedSample,
    SampleResult,
    SvmConfig,
    SvmModel,
    evaluate,
    predict,
    rank_by_margin,
    train_svm,
)
from .pca import PcaModel, fit_pca, pca_transform, pca_transform_matrix
from .rings import RingsConfig, RingsData, rings_oracle
from .dataset_io import (
    GoodBadManifest,
    ManifestEntry,
    load_manifest,
    read_fvec,
    read_labels,
    read_plan,
    write_fvec,
    write_labels,
    write_plan,
)

__version__ = "0.1.0"
