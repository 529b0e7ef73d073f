"""Training-corpus construction: distort, enhance, score with VIF, label.

Each reference image is degraded by every catalog preset; each degraded
image is run through all seven enhancers and the enhancer whose output is
closest to the true reference under VIF becomes the sample's label.  The
manifest is JSON-Lines: one header object (config + catalog version)
followed by one record per sample.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion, catalog, CATALOG_VERSION
from pricce.enhance import EnhancerConfig, EnhancerId, enhance
from pricce.imgcore import RasterImage, load_image, save_image
from pricce.metrics import MetricId, compare

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.jsonl"


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    ref_path: str
    dist_path: str
    spec: DistortionSpec
    vif_scores: tuple  # 7 floats in EnhancerId ordinal order
    label: EnhancerId
    label_margin: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "sample_id": self.sample_id,
                "ref_path": self.ref_path,
                "dist_path": self.dist_path,
                "family": self.spec.family.value,
                "params": list(self.spec.params),
                "vif_scores": {e.key: s for e, s in zip(EnhancerId, self.vif_scores)},
                "label": self.label.key,
                "label_margin": self.label_margin,
            },
            sort_keys=True,
        )

    @classmethod
    def from_dict(cls, d: dict) -> "SampleRecord":
        spec = DistortionSpec(DistortionFamily(d["family"]), tuple(d["params"]))
        scores = tuple(float(d["vif_scores"][e.key]) for e in EnhancerId)
        return cls(
            sample_id=d["sample_id"],
            ref_path=d["ref_path"],
            dist_path=d["dist_path"],
            spec=spec,
            vif_scores=scores,
            label=EnhancerId.from_key(d["label"]),
            label_margin=float(d["label_margin"]),
        )


@dataclass
class DatasetManifest:
    records: list[SampleRecord]
    enhancer_config: EnhancerConfig
    catalog_version: str = CATALOG_VERSION

    def write(self, path: str | Path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        header = json.dumps(
            {
                "enhancer_config": self.enhancer_config.to_dict(),
                "catalog_version": self.catalog_version,
            },
            sort_keys=True,
        )
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            for rec in sorted(self.records, key=lambda r: r.sample_id):
                fh.write(rec.to_json() + "\n")
        tmp.replace(path)

    @classmethod
    def read(cls, path: str | Path) -> "DatasetManifest":
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        if not lines:
            raise ValueError(f"{path}: empty manifest")
        header = json.loads(lines[0])
        records = [SampleRecord.from_dict(json.loads(ln)) for ln in lines[1:]]
        return cls(
            records=records,
            enhancer_config=EnhancerConfig.from_dict(header["enhancer_config"]),
            catalog_version=header["catalog_version"],
        )


def label_sample(
    ref: RasterImage, dist: RasterImage, cfg: EnhancerConfig | None = None
) -> tuple[EnhancerId, tuple]:
    """Run all seven enhancers on ``dist`` and pick the one whose output is
    closest to ``ref`` under VIF.  Ties go to the lowest ordinal."""
    cfg = cfg or EnhancerConfig()
    scores = []
    for algo in EnhancerId:
        enhanced = enhance(dist, algo, cfg)
        scores.append(compare(ref, enhanced, MetricId.VIF).value)
    scores = tuple(scores)
    label = EnhancerId(int(np.argmax(scores)))  # argmax returns first max: lowest ordinal
    return label, scores


def _margin(scores: tuple) -> float:
    ordered = sorted(scores, reverse=True)
    return float(ordered[0] - ordered[1])


def _build_one(args) -> dict:
    ref_path, dist_path, family, params, cfg_dict = args
    cfg = EnhancerConfig.from_dict(cfg_dict)
    spec = DistortionSpec(DistortionFamily(family), tuple(params))
    ref = load_image(ref_path)
    dist_path = Path(dist_path)
    if dist_path.exists():
        dist = load_image(dist_path)
    else:
        dist = apply_distortion(ref, spec)
        dist_path.parent.mkdir(parents=True, exist_ok=True)
        save_image(dist, dist_path)
    label, scores = label_sample(ref, dist, cfg)
    return {
        "label": label,
        "scores": scores,
    }


def generate(
    refs_dir: str | Path,
    out_dir: str | Path,
    cfg: EnhancerConfig | None = None,
    jobs: int = 1,
) -> DatasetManifest:
    """Build (or resume) the full refs x catalog dataset under ``out_dir``.

    Existing valid records in the manifest are kept without recomputation;
    unreadable references are collected in ``rejects.jsonl`` and skipped.
    """
    refs_dir = Path(refs_dir)
    out_dir = Path(out_dir)
    cfg = cfg or EnhancerConfig()
    ref_paths = sorted(
        p for p in refs_dir.iterdir() if p.suffix.lower() in (".png", ".bmp")
    )
    if not ref_paths:
        raise ValueError(f"{refs_dir}: no reference images (.png/.bmp) found")

    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / MANIFEST_NAME
    done: dict[str, SampleRecord] = {}
    if manifest_path.exists():
        existing = DatasetManifest.read(manifest_path)
        if existing.enhancer_config != cfg or existing.catalog_version != CATALOG_VERSION:
            raise ValueError(
                f"{manifest_path}: existing manifest was generated with a "
                f"different config/catalog; use a fresh output directory"
            )
        done = {r.sample_id: r for r in existing.records}

    presets = catalog()
    tasks = []
    rejects = []
    for ref_path in ref_paths:
        try:
            load_image(ref_path)
        except Exception as exc:
            rejects.append({"ref_path": str(ref_path), "error": str(exc)})
            log.warning("skipping unreadable reference %s: %s", ref_path, exc)
            continue
        for idx, spec in enumerate(presets):
            sample_id = f"{ref_path.stem}_{idx:02d}_{spec.family.value}"
            if sample_id in done:
                continue
            dist_path = out_dir / "images" / f"{sample_id}.png"
            tasks.append(
                (
                    sample_id,
                    str(ref_path),
                    str(dist_path),
                    spec.family.value,
                    list(spec.params),
                    cfg.to_dict(),
                )
            )

    def finish(sample_id, ref_path, dist_path, family, params, result):
        spec = DistortionSpec(DistortionFamily(family), tuple(params))
        rec = SampleRecord(
            sample_id=sample_id,
            ref_path=ref_path,
            dist_path=dist_path,
            spec=spec,
            vif_scores=result["scores"],
            label=result["label"],
            label_margin=_margin(result["scores"]),
        )
        done[sample_id] = rec

    if jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_build_one, [t[1:] for t in tasks])
            for task, result in zip(tasks, results):
                finish(task[0], task[1], task[2], task[3], task[4], result)
    else:
        for task in tasks:
            result = _build_one(task[1:])
            finish(task[0], task[1], task[2], task[3], task[4], result)

    manifest = DatasetManifest(records=list(done.values()), enhancer_config=cfg)
    manifest.write(manifest_path)
    if rejects:
        with open(out_dir / "rejects.jsonl", "w", encoding="utf-8") as fh:
            for rej in rejects:
                fh.write(json.dumps(rej) + "\n")
    return manifest


def class_counts(manifest: DatasetManifest) -> tuple:
    """Label histogram in EnhancerId ordinal order."""
    counts = [0] * len(EnhancerId)
    for rec in manifest.records:
        counts[rec.label] += 1
    return tuple(counts)


def audit_manifest(path: str | Path) -> list[str]:
    """Re-check the argmax/tie invariant on every record; returns a list of
    violation descriptions (empty means the manifest is consistent)."""
    manifest = DatasetManifest.read(path)
    problems = []
    seen = set()
    for rec in manifest.records:
        if rec.sample_id in seen:
            problems.append(f"{rec.sample_id}: duplicate sample_id")
        seen.add(rec.sample_id)
        expected = EnhancerId(int(np.argmax(rec.vif_scores)))
        if rec.label != expected:
            problems.append(
                f"{rec.sample_id}: label {rec.label.key} != argmax {expected.key}"
            )
        if rec.label_margin < 0 or abs(rec.label_margin - _margin(rec.vif_scores)) > 1e-9:
            problems.append(f"{rec.sample_id}: inconsistent label_margin")
    return problems
