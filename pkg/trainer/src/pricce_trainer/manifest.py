"""Reader for the dataset manifest interchange format.

The manifest is JSON Lines: a header object (enhancer configuration and
catalog version) followed by one record per sample.  Only the fields the
trainer needs are materialized; everything else is carried through the
header untouched so a training report can cite the corpus provenance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

# The canonical 7-class label space of the interchange format, in ordinal
# order.  This order is a contract with the scoring side: the exported
# model's metadata lists its own output order, and the consumer reorders
# probabilities into this canonical order.
CLASS_ORDER = ("he", "simplest_cb", "ying", "cao", "dhe", "bpdhe", "msrcr")


class ManifestError(ValueError):
    """Raised when a manifest file violates the interchange contract."""


@dataclass(frozen=True)
class Sample:
    sample_id: str
    ref_path: str
    dist_path: str
    label: int  # index into CLASS_ORDER
    label_margin: float


@dataclass(frozen=True)
class Manifest:
    header: dict
    samples: tuple

    def class_counts(self) -> tuple:
        counts = [0] * len(CLASS_ORDER)
        for s in self.samples:
            counts[s.label] += 1
        return tuple(counts)


def read_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ManifestError(f"{path}: manifest needs a header and at least one record")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: malformed header: {exc}") from exc
    if "enhancer_config" not in header or "catalog_version" not in header:
        raise ManifestError(f"{path}: header missing enhancer_config/catalog_version")

    samples = []
    seen = set()
    base = path.parent
    for i, line in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}:{i}: malformed record: {exc}") from exc
        try:
            label_key = rec["label"]
            if label_key not in CLASS_ORDER:
                raise ManifestError(
                    f"{path}:{i}: unknown label {label_key!r}; expected one of {CLASS_ORDER}"
                )
            # consistency check: the stored label must be the argmax of the
            # stored per-enhancer scores (the dataset generator's invariant)
            scores = rec["vif_scores"]
            best = max(CLASS_ORDER, key=lambda k: (scores[k], -CLASS_ORDER.index(k)))
            if best != label_key:
                raise ManifestError(
                    f"{path}:{i}: label {label_key!r} is not the argmax of vif_scores"
                )
            sample = Sample(
                sample_id=rec["sample_id"],
                ref_path=_resolve(rec["ref_path"], base),
                dist_path=_resolve(rec["dist_path"], base),
                label=CLASS_ORDER.index(label_key),
                label_margin=float(rec["label_margin"]),
            )
        except KeyError as exc:
            raise ManifestError(f"{path}:{i}: record missing field {exc}") from exc
        if sample.sample_id in seen:
            raise ManifestError(f"{path}:{i}: duplicate sample_id {sample.sample_id!r}")
        seen.add(sample.sample_id)
        samples.append(sample)
    return Manifest(header=header, samples=tuple(samples))


def _resolve(p: str, base: Path) -> str:
    """Record paths may be absolute or relative to the manifest directory."""
    path = Path(p)
    if path.is_absolute() or path.exists():
        return str(path)
    return str(base / path)
