"""Training loop, early stopping, and interchange-format export."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn as nn
from torch.utils.data import DataLoader

from pricce_trainer.data import (
    INPUT_SIDE,
    NORMALIZATION_MEAN,
    NORMALIZATION_STD,
    ManifestDataset,
    class_weights,
    grouped_split,
)
from pricce_trainer.manifest import CLASS_ORDER, read_manifest
from pricce_trainer.model import build_model

log = logging.getLogger(__name__)

METADATA_FILE = "metadata.json"


@dataclass
class TrainConfig:
    manifest_path: str
    out_path: str
    epochs: int = 150
    batch_size: int = 128
    lr: float = 0.001
    lr_decay_every: int = 50
    lr_decay_factor: float = 0.1
    val_fraction: float = 0.2
    patience: int = 15  # early stopping on validation-accuracy plateau
    seed: int = 0
    pretrained: bool = True
    num_workers: int = 0
    device: str = "cpu"
    # optional: weight each sample by its label margin (how decisively its
    # enhancer won); off by default
    margin_weighting: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class TrainReport:
    epochs_run: int
    best_epoch: int
    best_val_accuracy: float
    train_accuracy: float
    class_counts: tuple
    history: list = field(default_factory=list)  # per-epoch dicts
    seed: int = 0
    wall_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "epochs_run": self.epochs_run,
                "best_epoch": self.best_epoch,
                "best_val_accuracy": self.best_val_accuracy,
                "train_accuracy": self.train_accuracy,
                "class_counts": list(self.class_counts),
                "history": self.history,
                "seed": self.seed,
                "wall_seconds": self.wall_seconds,
                "class_order": list(CLASS_ORDER),
            },
            indent=2,
        )


def _accuracy(model: nn.Module, loader: DataLoader, device: str) -> float:
    model.eval()
    correct = total = 0
    with torch.no_grad():
        for x, y, _ in loader:
            pred = model(x.to(device)).argmax(dim=1).cpu()
            correct += int((pred == y).sum())
            total += len(y)
    return correct / max(total, 1)


def export_model(model: nn.Module, path: str | Path) -> Path:
    """Write the TorchScript interchange archive with required metadata."""
    path = Path(path)
    model = model.cpu().eval()
    scripted = torch.jit.script(model)
    metadata = {
        "class_order": list(CLASS_ORDER),
        "normalization_mean": list(NORMALIZATION_MEAN),
        "normalization_std": list(NORMALIZATION_STD),
        "input_side": INPUT_SIDE,
        "architecture": "resnet18 + fc(256)-dropout(0.5)-fc(128)-fc(7) head",
    }
    tmp = path.with_name(path.name + ".tmp")
    torch.jit.save(scripted, str(tmp), _extra_files={METADATA_FILE: json.dumps(metadata)})
    tmp.replace(path)
    return path


def train(cfg: TrainConfig) -> TrainReport:
    start = time.time()
    torch.manual_seed(cfg.seed)
    np.random.seed(cfg.seed)

    manifest = read_manifest(cfg.manifest_path)
    train_samples, val_samples = grouped_split(manifest, cfg.val_fraction, cfg.seed)
    log.info(
        "manifest: %d samples, %d train / %d val (grouped by reference)",
        len(manifest.samples), len(train_samples), len(val_samples),
    )

    train_loader = DataLoader(
        ManifestDataset(train_samples, augment=True, seed=cfg.seed),
        batch_size=cfg.batch_size,
        shuffle=True,
        num_workers=cfg.num_workers,
        generator=torch.Generator().manual_seed(cfg.seed),
    )
    train_eval_loader = DataLoader(
        ManifestDataset(train_samples, augment=False, seed=cfg.seed),
        batch_size=cfg.batch_size,
        num_workers=cfg.num_workers,
    )
    val_loader = DataLoader(
        ManifestDataset(val_samples, augment=False, seed=cfg.seed),
        batch_size=cfg.batch_size,
        num_workers=cfg.num_workers,
    )

    device = cfg.device
    model = build_model(pretrained=cfg.pretrained).to(device)
    weights = class_weights(train_samples, len(CLASS_ORDER)).to(device)
    criterion = nn.CrossEntropyLoss(weight=weights, reduction="none")
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    scheduler = torch.optim.lr_scheduler.StepLR(
        optimizer, step_size=cfg.lr_decay_every, gamma=cfg.lr_decay_factor
    )
    best_state = None
    best_val = -1.0
    best_epoch = 0
    history = []
    epochs_without_improvement = 0

    for epoch in range(1, cfg.epochs + 1):
        model.train()
        epoch_loss = 0.0
        n_batches = 0
        for x, y, margin in train_loader:
            optimizer.zero_grad()
            losses = criterion(model(x.to(device)), y.to(device))
            if cfg.margin_weighting:
                # emphasize decisive samples; +1 keeps zero-margin samples in play
                losses = losses * (1.0 + margin.float().to(device))
            loss = losses.mean()
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss)
            n_batches += 1
        scheduler.step()

        val_acc = _accuracy(model, val_loader, device)
        history.append(
            {
                "epoch": epoch,
                "train_loss": epoch_loss / max(n_batches, 1),
                "val_accuracy": val_acc,
                "lr": scheduler.get_last_lr()[0],
            }
        )
        log.info("epoch %d: loss %.4f val-acc %.4f", epoch, history[-1]["train_loss"], val_acc)

        if val_acc > best_val:
            best_val = val_acc
            best_epoch = epoch
            best_state = {k: v.detach().cpu().clone() for k, v in model.state_dict().items()}
            epochs_without_improvement = 0
        else:
            epochs_without_improvement += 1
            if epochs_without_improvement >= cfg.patience:
                log.info("early stop at epoch %d (no improvement for %d epochs)",
                         epoch, cfg.patience)
                break

    if best_state is not None:
        model.load_state_dict(best_state)
    train_acc = _accuracy(model, train_eval_loader, device)
    export_model(model, cfg.out_path)

    report = TrainReport(
        epochs_run=len(history),
        best_epoch=best_epoch,
        best_val_accuracy=best_val,
        train_accuracy=train_acc,
        class_counts=manifest.class_counts(),
        history=history,
        seed=cfg.seed,
        wall_seconds=time.time() - start,
    )
    report_path = Path(cfg.out_path).with_suffix(".report.json")
    tmp = report_path.with_name(report_path.name + ".tmp")
    tmp.write_text(report.to_json(), encoding="utf-8")
    tmp.replace(report_path)
    return report
