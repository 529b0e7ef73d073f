"""Classifier architecture: ResNet-18 backbone with a small MLP head."""

from __future__ import annotations

import logging

import torch
import torch.nn as nn

from pricce_trainer.manifest import CLASS_ORDER

log = logging.getLogger(__name__)


def build_model(pretrained: bool = True) -> nn.Module:
    """ResNet-18 whose final layer is replaced by FC(256) -> ReLU ->
    Dropout(0.5) -> FC(128) -> ReLU -> FC(7).  Falls back to random
    initialization when pretrained weights cannot be fetched (offline)."""
    from torchvision.models import resnet18

    backbone = None
    if pretrained:
        try:
            from torchvision.models import ResNet18_Weights

            backbone = resnet18(weights=ResNet18_Weights.IMAGENET1K_V1)
        except Exception as exc:
            log.warning("pretrained weights unavailable (%s); using random init", exc)
    if backbone is None:
        backbone = resnet18(weights=None)
    in_features = backbone.fc.in_features
    backbone.fc = nn.Sequential(
        nn.Linear(in_features, 256),
        nn.ReLU(inplace=True),
        nn.Dropout(0.5),
        nn.Linear(256, 128),
        nn.ReLU(inplace=True),
        nn.Linear(128, len(CLASS_ORDER)),
    )
    return backbone
