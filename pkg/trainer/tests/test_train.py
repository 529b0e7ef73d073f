import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
import torch

from conftest import write_png
from pricce_trainer.evaluate import evaluate_model
from pricce_trainer.manifest import CLASS_ORDER
from pricce_trainer.train import METADATA_FILE, TrainConfig, train


@pytest.fixture(scope="module")
def trained(fixture_manifest, tmp_path_factory):
    out = tmp_path_factory.mktemp("model") / "model.ptc"
    cfg = TrainConfig(
        manifest_path=str(fixture_manifest),
        out_path=str(out),
        epochs=1,
        batch_size=8,
        pretrained=False,  # offline environment; weights not required for smoke
        seed=0,
    )
    report = train(cfg)
    return out, report


class TestTrainSmoke:
    def test_one_epoch_exports_model_and_report(self, trained):
        out, report = trained
        assert out.exists()
        assert report.epochs_run == 1
        assert 0.0 <= report.best_val_accuracy <= 1.0
        report_path = out.with_suffix(".report.json")
        data = json.loads(report_path.read_text())
        assert data["class_order"] == list(CLASS_ORDER)
        assert len(data["history"]) == 1

    def test_exported_archive_carries_metadata(self, trained):
        out, _ = trained
        extra = {METADATA_FILE: ""}
        module = torch.jit.load(str(out), _extra_files=extra)
        meta = json.loads(extra[METADATA_FILE])
        assert meta["class_order"] == list(CLASS_ORDER)
        assert len(meta["normalization_mean"]) == 3
        assert len(meta["normalization_std"]) == 3
        assert meta["input_side"] == 224
        logits = module(torch.zeros(1, 3, 224, 224))
        assert tuple(logits.shape) == (1, len(CLASS_ORDER))

    def test_exported_model_works_through_consumer_cli(self, trained, tmp_path):
        """The interchange contract: the scoring package's command line must
        accept the exported model as-is."""
        out, _ = trained
        img = tmp_path / "img.png"
        write_png(img, seed=42)
        proc = subprocess.run(
            [sys.executable, "-m", "pricce.cli", "classify",
             "--model", str(out), "--in", str(img)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        fields = proc.stdout.split()
        assert fields[0] in CLASS_ORDER
        probs = [float(f) for f in fields[1:]]
        assert len(probs) == len(CLASS_ORDER)
        assert sum(probs) == pytest.approx(1.0, abs=1e-4)
        assert all(p >= 0 for p in probs)

    def test_seed_reproducible(self, fixture_manifest, tmp_path):
        accs = []
        for run in range(2):
            out = tmp_path / f"m{run}.ptc"
            cfg = TrainConfig(
                manifest_path=str(fixture_manifest),
                out_path=str(out),
                epochs=1,
                batch_size=8,
                pretrained=False,
                seed=123,
            )
            accs.append(train(cfg).best_val_accuracy)
        assert abs(accs[0] - accs[1]) <= 0.005


class TestEvaluateModel:
    def test_confusion_matrix_properties(self, trained, fixture_manifest, tmp_path):
        out, _ = trained
        csv_path = tmp_path / "confusion.csv"
        confusion, accuracy = evaluate_model(out, fixture_manifest, out_csv=csv_path)
        assert confusion.shape == (7, 7)
        assert confusion.sum() == 40  # every manifest sample counted once
        assert accuracy == pytest.approx(np.trace(confusion) / confusion.sum())
        rows = csv_path.read_text().splitlines()
        assert rows[0].split(",")[1:] == list(CLASS_ORDER)
        assert rows[-1].startswith("accuracy,")
        # row sums equal per-class true counts
        from pricce_trainer.manifest import read_manifest

        counts = read_manifest(fixture_manifest).class_counts()
        assert tuple(confusion.sum(axis=1)) == counts

    def test_leakage_against_train_refs_rejected(self, trained, fixture_manifest):
        from pricce_trainer.data import SplitLeakageError
        from pricce_trainer.manifest import read_manifest

        out, _ = trained
        refs = {s.ref_path for s in read_manifest(fixture_manifest).samples}
        with pytest.raises(SplitLeakageError):
            evaluate_model(out, fixture_manifest, train_refs=refs)


class TestCli:
    def test_train_and_evaluate_subcommands(self, fixture_manifest, tmp_path, capsys):
        from pricce_trainer.cli import main

        out = tmp_path / "cli_model.ptc"
        rc = main([
            "train", "--manifest", str(fixture_manifest), "--out", str(out),
            "--epochs", "1", "--batch-size", "8", "--no-pretrained", "--seed", "1",
        ])
        assert rc == 0 and out.exists()
        report = json.loads(capsys.readouterr().out)
        assert report["epochs_run"] == 1

        rc = main(["evaluate", "--model", str(out), "--manifest", str(fixture_manifest)])
        assert rc == 0
        assert capsys.readouterr().out.startswith("accuracy ")

    def test_bad_manifest_is_data_error(self, tmp_path):
        from pricce_trainer.cli import main

        bad = tmp_path / "bad.jsonl"
        bad.write_text("{}\n{}\n")
        rc = main(["train", "--manifest", str(bad), "--out", str(tmp_path / "m.ptc"),
                   "--epochs", "1", "--no-pretrained"])
        assert rc == 2

    def test_no_subcommand_is_usage_error(self):
        from pricce_trainer.cli import main

        assert main([]) == 1
