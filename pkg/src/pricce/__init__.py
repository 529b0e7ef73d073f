"""PRICCE: no-reference quality assessment of contrast-distorted images.

The pipeline turns a no-reference problem into a full-reference one:
a classifier picks the contrast-enhancement algorithm most likely to
reconstruct something close to the (unavailable) pristine reference,
the chosen enhancer produces a pseudo-reference, and a full-reference
metric scores the distorted input against it.
"""

from pricce.imgcore import RasterImage, load_image, save_image
from pricce.distort import DistortionSpec, catalog, apply_distortion
from pricce.enhance import EnhancerId, EnhancerConfig, enhance
from pricce.metrics import MetricId, MetricScore, compare
from pricce.scorer import PricceResult, pricce_score, pricce_score_oracle

__all__ = [
    "RasterImage",
    "load_image",
    "save_image",
    "DistortionSpec",
    "catalog",
    "apply_distortion",
    "EnhancerId",
    "EnhancerConfig",
    "enhance",
    "MetricId",
    "MetricScore",
    "compare",
    "PricceResult",
    "pricce_score",
    "pricce_score_oracle",
]

__version__ = "0.1.0"
