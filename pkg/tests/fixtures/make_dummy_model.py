"""Regenerate the checked-in dummy classifier archive used by the
load/predict contract tests.  Weights are deterministic so predictions are
stable regression anchors."""

import json
from pathlib import Path

import torch
from torch import nn

from pricce.classifier import METADATA_FILE
from pricce.enhance import EnhancerId


class TinyClassifier(nn.Module):
    def __init__(self, n_classes: int = 7):
        super().__init__()
        self.fc = nn.Linear(3, n_classes)

    def forward(self, x):
        return self.fc(x.mean(dim=(2, 3)))


def build(path: Path, n_classes: int = 7, with_metadata: bool = True) -> Path:
    model = TinyClassifier(n_classes)
    with torch.no_grad():
        w = torch.arange(n_classes * 3, dtype=torch.float32).reshape(n_classes, 3)
        model.fc.weight.copy_((w - w.mean()) / 10.0)
        model.fc.bias.copy_(torch.linspace(-0.5, 0.5, n_classes))
    scripted = torch.jit.script(model.eval())
    extra = {}
    if with_metadata:
        extra[METADATA_FILE] = json.dumps(
            {
                "class_order": [e.key for e in EnhancerId],
                "normalization_mean": [0.485, 0.456, 0.406],
                "normalization_std": [0.229, 0.224, 0.225],
                "input_side": 224,
            }
        )
    torch.jit.save(scripted, str(path), _extra_files=extra)
    return path


if __name__ == "__main__":
    out = Path(__file__).parent / "dummy_model.ptc"
    build(out)
    print(f"wrote {out}")
