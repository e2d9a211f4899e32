"""Co-localization over shared convolutional descriptor sets."""

from .backend import BACKEND_NAME, available_backends
from .descriptors import (
    Annotation,
    DescriptorGrid,
    DescriptorSet,
    load_manifest,
    load_set,
    read_annotations,
    read_descriptor_file,
    write_descriptor_file,
)
from .errors import (
    DdtError,
    DegenerateSpectrumError,
    DescriptorFormatError,
    DimensionMismatchError,
    TruncatedPayloadError,
    ValidationError,
)
from .evaluation import (
    CorLocReport,
    ImageEvaluation,
    RocReport,
    evaluate_corloc,
    evaluate_roc,
    iou,
)
from .geometry import BoundingBox
from .linalg import (
    EigenPair,
    SetStatistics,
    compute_statistics,
    top_eigenpairs,
)
from .localize import (
    bounding_box,
    largest_connected_component,
    localize_image,
    localize_map,
    positive_mask,
    resize_nearest,
)
from .scda import AggregationMap, aggregation_map, scda_mask
from .synth import SynthResult, SynthSpec, generate, write_dataset
from .transform import (
    DdtModel,
    IndicatorMap,
    component_projection,
    fit,
    indicator_map,
    noise_score,
    orient_sign,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "available_backends",
    "Annotation",
    "DescriptorGrid",
    "DescriptorSet",
    "load_manifest",
    "load_set",
    "read_annotations",
    "read_descriptor_file",
    "write_descriptor_file",
    "DdtError",
    "DegenerateSpectrumError",
    "DescriptorFormatError",
    "DimensionMismatchError",
    "TruncatedPayloadError",
    "ValidationError",
    "CorLocReport",
    "ImageEvaluation",
    "RocReport",
    "evaluate_corloc",
    "evaluate_roc",
    "iou",
    "BoundingBox",
    "EigenPair",
    "SetStatistics",
    "compute_statistics",
    "top_eigenpairs",
    "bounding_box",
    "largest_connected_component",
    "localize_image",
    "localize_map",
    "positive_mask",
    "resize_nearest",
    "AggregationMap",
    "aggregation_map",
    "scda_mask",
    "SynthResult",
    "SynthSpec",
    "generate",
    "write_dataset",
    "DdtModel",
    "IndicatorMap",
    "component_projection",
    "fit",
    "indicator_map",
    "noise_score",
    "orient_sign",
    "__version__",
]
