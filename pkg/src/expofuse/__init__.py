"""Automatic exposure compensation and fusion for bracketed image stacks.

The pipeline brightens or darkens each input so that its well-exposed
region sits at middle gray before the stack is fused: local contrast
enhancement by dodging and burning, per-image gain estimation against a
luminance partition, photographic tone mapping (Reinhard et al. 2002),
and weighted-average or pyramid fusion (Mertens et al. 2009).  Quality
is scored with discrete entropy, TMQI statistical naturalness (Yeganeh
and Wang 2013), and well-exposedness.
"""

from .compensate import (
    DEFAULT_TARGET_GRAY,
    CompensationPlan,
    DegenerateRangeError,
    apply_gain,
    estimate_gains,
    middle_index,
    partition_regions,
    partition_thresholds,
)
from .enhance import dodge_burn
from .filters import (
    DEFAULT_SIGMA_RANGE,
    DEFAULT_SIGMA_SPATIAL,
    BilateralParams,
    bilateral_local_average,
)
from .fuse import (
    FusionConfig,
    InvalidLevelsError,
    ZeroWeightSumError,
    auto_pyramid_levels,
    collapse_pyramid,
    gaussian_pyramid,
    laplacian_pyramid,
    max_pyramid_levels,
    mertens_weights,
    pyramid_blend,
    simple_weights,
    weighted_average,
)
from .image import (
    DEFAULT_EPSILON,
    EmptyRegionError,
    ExposureStack,
    geometric_mean,
    luminance_of,
)
from .io import (
    CorruptFileError,
    IoFailureError,
    UnsupportedFormatError,
    linear_to_srgb,
    quantize,
    read_ev_sidecar,
    read_image,
    srgb_to_linear,
    write_ev_sidecar,
    write_image,
)
from .metrics import (
    QualityReport,
    build_report,
    discrete_entropy,
    max_well_exposedness,
    statistical_naturalness,
    well_exposedness_map,
)
from .pipeline import (
    Intermediates,
    PipelineParams,
    PipelineResult,
    adjust_stack,
    run,
)
from .synth import (
    CrfModel,
    IrradianceField,
    builtin_fields,
    expose,
    make_stack,
    write_stack,
)
from .tonemap import reinhard, restore_color, tonemap_stack_image

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_SIGMA_RANGE",
    "DEFAULT_SIGMA_SPATIAL",
    "DEFAULT_TARGET_GRAY",
    "BilateralParams",
    "CompensationPlan",
    "CorruptFileError",
    "CrfModel",
    "DegenerateRangeError",
    "EmptyRegionError",
    "ExposureStack",
    "FusionConfig",
    "Intermediates",
    "InvalidLevelsError",
    "IoFailureError",
    "IrradianceField",
    "PipelineParams",
    "PipelineResult",
    "QualityReport",
    "UnsupportedFormatError",
    "ZeroWeightSumError",
    "adjust_stack",
    "apply_gain",
    "auto_pyramid_levels",
    "bilateral_local_average",
    "build_report",
    "builtin_fields",
    "collapse_pyramid",
    "discrete_entropy",
    "dodge_burn",
    "estimate_gains",
    "expose",
    "gaussian_pyramid",
    "geometric_mean",
    "laplacian_pyramid",
    "linear_to_srgb",
    "luminance_of",
    "make_stack",
    "max_pyramid_levels",
    "max_well_exposedness",
    "mertens_weights",
    "middle_index",
    "partition_regions",
    "partition_thresholds",
    "pyramid_blend",
    "quantize",
    "read_ev_sidecar",
    "read_image",
    "reinhard",
    "restore_color",
    "run",
    "simple_weights",
    "srgb_to_linear",
    "statistical_naturalness",
    "tonemap_stack_image",
    "weighted_average",
    "well_exposedness_map",
    "write_ev_sidecar",
    "write_image",
    "write_stack",
]
