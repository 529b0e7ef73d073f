"""Enhancer selection for unseen distorted images.

Two routes: a trained model loaded from a TorchScript archive (the
interchange format this project uses, since no ONNX runtime is available
in the target environment), or the reference-using oracle for validation.

Required metadata (JSON in the archive's ``metadata.json`` extra file):
``class_order`` (7 enhancer keys), ``normalization_mean``,
``normalization_std`` (3 floats each), ``input_side`` (224).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from pricce.dataset import label_sample
from pricce.enhance import EnhancerConfig, EnhancerId
from pricce.imgcore import RasterImage

METADATA_FILE = "metadata.json"
REQUIRED_KEYS = ("class_order", "normalization_mean", "normalization_std")
INPUT_SIDE = 224


class ModelFormatError(ValueError):
    """Raised when a model file fails load-time validation."""


@dataclass(frozen=True)
class Prediction:
    label: EnhancerId
    probabilities: tuple  # 7 floats in EnhancerId ordinal order

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        if len(probs) != len(EnhancerId):
            raise ValueError(f"expected {len(EnhancerId)} probabilities, got {len(probs)}")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-5:
            raise ValueError("probabilities must be non-negative and sum to 1")
        object.__setattr__(self, "probabilities", probs)


@dataclass(frozen=True)
class ModelHandle:
    source: Path
    input_side: int
    class_order: tuple  # permutation of all EnhancerIds
    normalization_mean: tuple
    normalization_std: tuple
    module: object = field(repr=False)


def load_model(path: str | Path) -> ModelHandle:
    """Load and eagerly validate a TorchScript classifier archive."""
    import torch

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"model file not found: {path}")
    extra = {METADATA_FILE: ""}
    try:
        module = torch.jit.load(str(path), map_location="cpu", _extra_files=extra)
    except Exception as exc:
        raise ModelFormatError(f"{path}: cannot parse model archive: {exc}") from exc
    module.eval()
    raw = extra[METADATA_FILE]
    if not raw:
        raise ModelFormatError(f"{path}: missing {METADATA_FILE} metadata")
    try:
        meta = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: malformed metadata JSON: {exc}") from exc
    for key in REQUIRED_KEYS:
        if key not in meta:
            raise ModelFormatError(f"{path}: metadata missing required key {key!r}")
    class_order = tuple(EnhancerId.from_key(k) for k in meta["class_order"])
    if sorted(class_order) != list(EnhancerId):
        raise ModelFormatError(
            f"{path}: class_order must be a permutation of all "
            f"{len(EnhancerId)} enhancer keys, got {meta['class_order']}"
        )
    input_side = int(meta.get("input_side", INPUT_SIDE))
    mean = tuple(float(v) for v in meta["normalization_mean"])
    std = tuple(float(v) for v in meta["normalization_std"])
    if len(mean) != 3 or len(std) != 3:
        raise ModelFormatError(f"{path}: normalization constants must have 3 entries")
    # eager shape check: a forward pass must yield one logit per class
    with torch.no_grad():
        out = module(torch.zeros(1, 3, input_side, input_side))
    if out.ndim != 2 or out.shape[1] != len(EnhancerId):
        raise ModelFormatError(
            f"{path}: model outputs {tuple(out.shape)}, expected "
            f"(1, {len(EnhancerId)}) class logits"
        )
    return ModelHandle(
        source=path,
        input_side=input_side,
        class_order=class_order,
        normalization_mean=mean,
        normalization_std=std,
        module=module,
    )


def predict(model: ModelHandle, img: RasterImage) -> Prediction:
    """Resize, normalize, forward, softmax."""
    import torch
    import torch.nn.functional as F

    x = torch.from_numpy(img.as_rgb().copy()).permute(2, 0, 1).unsqueeze(0).float() / 255.0
    x = F.interpolate(
        x, size=(model.input_side, model.input_side), mode="bilinear", align_corners=False
    )
    mean = torch.tensor(model.normalization_mean).view(1, 3, 1, 1)
    std = torch.tensor(model.normalization_std).view(1, 3, 1, 1)
    x = (x - mean) / std
    try:
        with torch.no_grad():
            logits = model.module(x)[0]
    except Exception as exc:
        raise RuntimeError(f"inference failed for model {model.source}: {exc}") from exc
    probs_model_order = torch.softmax(logits.double(), dim=0).numpy()
    probs = np.zeros(len(EnhancerId))
    for slot, enhancer in enumerate(model.class_order):
        probs[enhancer] = probs_model_order[slot]
    probs = probs / probs.sum()
    return Prediction(label=EnhancerId(int(np.argmax(probs))), probabilities=tuple(probs))


def oracle_predict(
    ref: RasterImage, dist: RasterImage, cfg: EnhancerConfig | None = None
) -> Prediction:
    """Reference-using upper bound: one-hot on the VIF labeling winner."""
    label, _ = label_sample(ref, dist, cfg)
    probs = [0.0] * len(EnhancerId)
    probs[label] = 1.0
    return Prediction(label=label, probabilities=tuple(probs))
