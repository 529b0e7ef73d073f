"""Held-out evaluation: confusion matrix and top-1 accuracy."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import torch
from torch.utils.data import DataLoader

from pricce_trainer.data import ManifestDataset, check_no_leakage
from pricce_trainer.manifest import CLASS_ORDER, read_manifest

METADATA_FILE = "metadata.json"


def _load_interchange(path: str | Path):
    path = Path(path)
    extra = {METADATA_FILE: ""}
    module = torch.jit.load(str(path), map_location="cpu", _extra_files=extra)
    module.eval()
    meta = json.loads(extra[METADATA_FILE])
    order = tuple(meta["class_order"])
    if sorted(order) != sorted(CLASS_ORDER):
        raise ValueError(f"{path}: class_order is not the canonical label space")
    return module, order


def evaluate_model(
    model_path: str | Path,
    manifest_path: str | Path,
    out_csv: str | Path | None = None,
    train_refs: set | None = None,
    batch_size: int = 64,
) -> tuple[np.ndarray, float]:
    """Run the model over every manifest sample and return the 7x7
    confusion matrix (rows = true label, columns = predicted) and top-1
    accuracy.  If ``train_refs`` is given, any overlap with the manifest's
    reference images is an error (split leakage)."""
    manifest = read_manifest(manifest_path)
    if train_refs is not None:
        class _Stub:  # check_no_leakage only reads .ref_path
            def __init__(self, r):
                self.ref_path = r

        check_no_leakage([_Stub(r) for r in train_refs], list(manifest.samples))

    module, order = _load_interchange(model_path)
    # map model output slots to canonical label indices
    slot_to_canonical = [CLASS_ORDER.index(k) for k in order]

    loader = DataLoader(
        ManifestDataset(list(manifest.samples), augment=False, seed=0),
        batch_size=batch_size,
    )
    n = len(CLASS_ORDER)
    confusion = np.zeros((n, n), dtype=int)
    with torch.no_grad():
        for x, y, _ in loader:
            slots = module(x).argmax(dim=1)
            for true, slot in zip(y.tolist(), slots.tolist()):
                confusion[true, slot_to_canonical[slot]] += 1

    accuracy = float(np.trace(confusion)) / max(confusion.sum(), 1)
    if out_csv is not None:
        out_csv = Path(out_csv)
        tmp = out_csv.with_name(out_csv.name + ".tmp")
        with open(tmp, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\pred", *CLASS_ORDER])
            for key, row in zip(CLASS_ORDER, confusion):
                writer.writerow([key, *row.tolist()])
            writer.writerow(["accuracy", f"{accuracy:.6f}"])
        tmp.replace(out_csv)
    return confusion, accuracy
