"""Training side of the enhancer-selection classifier.

This package talks to the scoring library only through its public
interchange formats: it reads the dataset manifest (JSON Lines) produced
by ``pricce gen-dataset`` and writes a TorchScript model archive with the
metadata the ``pricce classify`` / ``pricce score`` commands require.
"""

from pricce_trainer.manifest import CLASS_ORDER, ManifestError, read_manifest
from pricce_trainer.train import TrainConfig, train
from pricce_trainer.evaluate import evaluate_model

__all__ = [
    "CLASS_ORDER",
    "ManifestError",
    "read_manifest",
    "TrainConfig",
    "train",
    "evaluate_model",
]

__version__ = "0.1.0"
