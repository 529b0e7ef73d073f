"""
End-to-end scoring and dataset generation
=========================================

The no-reference score of a contrast-distorted image is produced in three
stages: classify (pick the most promising enhancer), enhance (build a
pseudo-reference), and compare (full-reference metric between the
pseudo-reference and the input).  This script runs the pipeline with the
*oracle* classifier — which peeks at the pristine image to pick the enhancer,
providing an upper bound that needs no trained model — and then generates a
small labeled dataset the way the training corpus is built.
"""

from pathlib import Path

from _shared import make_photo, out_path
from pricce.dataset import audit_manifest, generate
from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion
from pricce.enhance import EnhancerConfig
from pricce.imgcore import save_image
from pricce.metrics import MetricId
from pricce.scorer import pricce_score_oracle

cfg = EnhancerConfig()
photo = make_photo(3)

# ---------------------------------------------------------------------------
# Score a severity ladder.  Higher MS-SSIM against the pseudo-reference
# means the distortion removed less structure, so scores should fall as the
# mean shift grows.
print(f"{'delta':>6s} {'score':>8s} {'chosen enhancer':>16s}")
for delta in (20.0, 40.0, 60.0, 80.0, 100.0):
    dist = apply_distortion(
        photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (delta,))
    )
    result = pricce_score_oracle(dist, photo, MetricId.MSSSIM, cfg)
    print(f"{delta:6.0f} {result.score:8.4f} {result.chosen_enhancer.key:>16s}")

# ---------------------------------------------------------------------------
# Dataset generation: one reference image expands into 33 labeled records
# (one per catalog preset).  The manifest is a JSONL file with a header line
# recording the enhancer configuration and catalog version, which lets the
# auditor re-check every label later.
refs = out_path("dataset_refs")
refs.mkdir(exist_ok=True)
save_image(photo, refs / "photo.png")

dataset_dir = out_path("dataset")
manifest = generate(refs, dataset_dir, cfg)
print(f"\ngenerated {len(manifest.records)} records "
      f"under {Path(dataset_dir).name}/")

counts = {}
for rec in manifest.records:
    counts[rec.label.key] = counts.get(rec.label.key, 0) + 1
print("label distribution:", dict(sorted(counts.items())))

problems = audit_manifest(dataset_dir / "manifest.jsonl")
print("audit:", "clean" if not problems else problems)

# Generation is resumable and idempotent: a second run finds every record
# already present and rewrites an identical manifest.
again = generate(refs, dataset_dir, cfg)
assert len(again.records) == len(manifest.records)
print("re-run reused all existing records")
