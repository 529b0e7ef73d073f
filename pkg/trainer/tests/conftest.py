import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from pricce_trainer.manifest import CLASS_ORDER


def write_png(path: Path, seed: int, side: int = 64) -> None:
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:side, 0:side] / (side - 1)
    base = 50.0 + 150.0 * (0.5 * xx + 0.5 * yy)
    plane = base + rng.normal(0, 20, (side, side))
    rgb = np.stack([plane + off for off in rng.normal(0, 10, 3)], axis=-1)
    Image.fromarray(np.clip(rgb, 0, 255).astype(np.uint8)).save(path)


def make_manifest(
    root: Path, n_refs: int = 5, per_ref: int = 8, n_classes: int = len(CLASS_ORDER)
) -> Path:
    """Synthesize a manifest in the interchange layout: header line, then
    one record per sample, with images on disk."""
    images = root / "images"
    refs = root / "refs"
    images.mkdir(parents=True)
    refs.mkdir(parents=True)
    rng = np.random.default_rng(0)
    lines = [
        json.dumps({"enhancer_config": {}, "catalog_version": "1"}, sort_keys=True)
    ]
    for r in range(n_refs):
        ref_path = refs / f"ref{r}.png"
        write_png(ref_path, seed=r)
        for i in range(per_ref):
            sample_id = f"ref{r}_{i:02d}_synthetic"
            dist_path = images / f"{sample_id}.png"
            write_png(dist_path, seed=1000 * r + i)
            label = int(rng.integers(0, n_classes))
            scores = rng.uniform(0.1, 0.9, len(CLASS_ORDER))
            scores[label] = 1.0 + rng.uniform(0.05, 0.3)
            ordered = np.sort(scores)[::-1]
            lines.append(
                json.dumps(
                    {
                        "sample_id": sample_id,
                        "ref_path": str(ref_path),
                        "dist_path": str(dist_path),
                        "family": "mean-shift",
                        "params": [20.0],
                        "vif_scores": {k: float(s) for k, s in zip(CLASS_ORDER, scores)},
                        "label": CLASS_ORDER[label],
                        "label_margin": float(ordered[0] - ordered[1]),
                    },
                    sort_keys=True,
                )
            )
    manifest_path = root / "manifest.jsonl"
    manifest_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest_path


@pytest.fixture(scope="session")
def fixture_manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return make_manifest(root)
