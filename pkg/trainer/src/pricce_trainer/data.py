"""Image loading, augmentation, and grouped train/validation splitting."""

from __future__ import annotations

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset

from pricce_trainer.manifest import Manifest, Sample

INPUT_SIDE = 224
# Inputs are scaled to [0, 1]; the exported metadata carries these so the
# consumer reproduces the exact preprocessing.
NORMALIZATION_MEAN = (0.485, 0.456, 0.406)
NORMALIZATION_STD = (0.229, 0.224, 0.225)


class SplitLeakageError(ValueError):
    """A reference image contributed samples to both splits."""


def grouped_split(
    manifest: Manifest, val_fraction: float, seed: int
) -> tuple[list, list]:
    """Split samples into (train, val) keeping every reference image's
    samples on one side only.  All 33 distortions of one photo are
    near-duplicates of each other; leaking any across the split would
    inflate validation accuracy."""
    if not 0.0 < val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in (0, 1), got {val_fraction}")
    groups: dict[str, list[Sample]] = {}
    for s in manifest.samples:
        groups.setdefault(s.ref_path, []).append(s)
    refs = sorted(groups)
    if len(refs) < 2:
        raise ValueError("grouped split needs at least 2 reference images")
    rng = np.random.default_rng(seed)
    rng.shuffle(refs)
    n_val = max(1, round(val_fraction * len(refs)))
    n_val = min(n_val, len(refs) - 1)  # keep at least one training group
    val_refs = set(refs[:n_val])
    train = [s for r in refs[n_val:] for s in groups[r]]
    val = [s for r in sorted(val_refs) for s in groups[r]]
    check_no_leakage(train, val)
    return train, val


def check_no_leakage(train: list, val: list) -> None:
    shared = {s.ref_path for s in train} & {s.ref_path for s in val}
    if shared:
        raise SplitLeakageError(
            f"{len(shared)} reference image(s) appear in both splits, "
            f"e.g. {sorted(shared)[:3]}"
        )


def _load_rgb(path: str) -> Image.Image:
    with Image.open(path) as img:
        return img.convert("RGB")


def _augment(img: Image.Image, rng: np.random.Generator) -> Image.Image:
    # Geometric augmentations only: the enhancer label depends on the
    # image's tone distribution, so any color/intensity transform would
    # silently change the ground truth.
    if rng.random() < 0.5:
        img = img.transpose(Image.FLIP_LEFT_RIGHT)
    if rng.random() < 0.5:
        img = img.transpose(Image.FLIP_TOP_BOTTOM)
    if rng.random() < 0.5:
        # 45-degree rotation; blank corners filled by replicating the edge
        # (expand + crop back keeps the original frame size)
        arr = np.asarray(img)
        pad = arr.shape[0] // 2
        padded = np.pad(arr, ((pad, pad), (pad, pad), (0, 0)), mode="edge")
        rot = Image.fromarray(padded).rotate(45, resample=Image.BILINEAR)
        w, h = rot.size
        left, top = (w - img.size[0]) // 2, (h - img.size[1]) // 2
        img = rot.crop((left, top, left + img.size[0], top + img.size[1]))
    return img


def to_tensor(img: Image.Image) -> torch.Tensor:
    img = img.resize((INPUT_SIDE, INPUT_SIDE), Image.BILINEAR)
    x = torch.from_numpy(np.asarray(img).copy()).permute(2, 0, 1).float() / 255.0
    mean = torch.tensor(NORMALIZATION_MEAN).view(3, 1, 1)
    std = torch.tensor(NORMALIZATION_STD).view(3, 1, 1)
    return (x - mean) / std


class ManifestDataset(Dataset):
    def __init__(self, samples: list, augment: bool, seed: int):
        self.samples = list(samples)
        self.augment = augment
        self.seed = seed

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, idx: int):
        sample = self.samples[idx]
        img = _load_rgb(sample.dist_path)
        if self.augment:
            # per-item generator keeps workers and epochs deterministic
            rng = np.random.default_rng((self.seed, idx))
            img = _augment(img, rng)
        return to_tensor(img), sample.label, sample.label_margin


def class_weights(samples: list, n_classes: int) -> torch.Tensor:
    """Inverse-frequency weights, normalized to mean 1; absent classes get
    weight 0 so the loss stays finite."""
    counts = np.zeros(n_classes)
    for s in samples:
        counts[s.label] += 1
    weights = np.zeros(n_classes)
    present = counts > 0
    weights[present] = 1.0 / counts[present]
    weights[present] /= weights[present].mean()
    return torch.tensor(weights, dtype=torch.float32)
