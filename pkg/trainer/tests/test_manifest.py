import json

import pytest

from conftest import make_manifest
from pricce_trainer.manifest import CLASS_ORDER, ManifestError, read_manifest


class TestReadManifest:
    def test_reads_fixture(self, fixture_manifest):
        manifest = read_manifest(fixture_manifest)
        assert len(manifest.samples) == 40
        assert manifest.header["catalog_version"] == "1"
        assert sum(manifest.class_counts()) == 40

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "m.jsonl"
        path.write_text(json.dumps({"nope": 1}) + "\n" + json.dumps({}) + "\n")
        with pytest.raises(ManifestError, match="header"):
            read_manifest(path)

    def test_unknown_label_rejected(self, tmp_path):
        mpath = make_manifest(tmp_path, n_refs=1, per_ref=1)
        lines = mpath.read_text().splitlines()
        rec = json.loads(lines[1])
        rec["label"] = "clahe"
        mpath.write_text(lines[0] + "\n" + json.dumps(rec) + "\n")
        with pytest.raises(ManifestError, match="unknown label"):
            read_manifest(mpath)

    def test_label_must_be_argmax(self, tmp_path):
        mpath = make_manifest(tmp_path, n_refs=1, per_ref=1)
        lines = mpath.read_text().splitlines()
        rec = json.loads(lines[1])
        worst = min(CLASS_ORDER, key=lambda k: rec["vif_scores"][k])
        rec["label"] = worst
        mpath.write_text(lines[0] + "\n" + json.dumps(rec) + "\n")
        with pytest.raises(ManifestError, match="argmax"):
            read_manifest(mpath)

    def test_duplicate_sample_id_rejected(self, tmp_path):
        mpath = make_manifest(tmp_path, n_refs=1, per_ref=2)
        lines = mpath.read_text().splitlines()
        mpath.write_text("\n".join([lines[0], lines[1], lines[1]]) + "\n")
        with pytest.raises(ManifestError, match="duplicate"):
            read_manifest(mpath)


class TestGroupedSplit:
    def test_no_reference_crosses_split(self, fixture_manifest):
        from pricce_trainer.data import grouped_split

        manifest = read_manifest(fixture_manifest)
        train, val = grouped_split(manifest, 0.2, seed=0)
        assert {s.ref_path for s in train}.isdisjoint({s.ref_path for s in val})
        assert len(train) + len(val) == len(manifest.samples)
        assert train and val

    def test_leakage_detected(self, fixture_manifest):
        from pricce_trainer.data import SplitLeakageError, check_no_leakage

        manifest = read_manifest(fixture_manifest)
        half = len(manifest.samples) // 2
        with pytest.raises(SplitLeakageError):
            # naive per-sample split shares references across both halves
            check_no_leakage(list(manifest.samples[:half]), list(manifest.samples[half:]))

    def test_split_is_seed_deterministic(self, fixture_manifest):
        from pricce_trainer.data import grouped_split

        manifest = read_manifest(fixture_manifest)
        a = grouped_split(manifest, 0.2, seed=7)
        b = grouped_split(manifest, 0.2, seed=7)
        assert [s.sample_id for s in a[0]] == [s.sample_id for s in b[0]]


class TestClassWeights:
    def test_inverse_frequency(self, fixture_manifest):
        import numpy as np

        from pricce_trainer.data import class_weights

        manifest = read_manifest(fixture_manifest)
        weights = class_weights(list(manifest.samples), len(CLASS_ORDER))
        counts = np.array(manifest.class_counts(), dtype=float)
        present = counts > 0
        # rarer classes get larger weights; mean over present classes is 1
        w = weights.numpy()
        assert w[~present].sum() == 0
        assert w[present].mean() == pytest.approx(1.0)
        order_by_count = np.argsort(counts[present])
        assert (np.diff(w[present][order_by_count]) <= 1e-9).all()
