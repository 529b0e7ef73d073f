import json
from pathlib import Path

import numpy as np
import pytest
import torch

from conftest import natural_image
from fixtures.make_dummy_model import TinyClassifier, build
from pricce.classifier import (
    METADATA_FILE,
    ModelFormatError,
    Prediction,
    load_model,
    oracle_predict,
    predict,
)
from pricce.dataset import label_sample
from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion
from pricce.enhance import EnhancerConfig, EnhancerId

FIXTURES = Path(__file__).parent / "fixtures"
DUMMY = FIXTURES / "dummy_model.ptc"


@pytest.fixture(scope="module")
def dummy_path(tmp_path_factory):
    if DUMMY.exists():
        return DUMMY
    return build(tmp_path_factory.mktemp("model") / "dummy_model.ptc")


class TestPrediction:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="7"):
            Prediction(EnhancerId.HE, (1.0,))

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="sum to 1"):
            Prediction(EnhancerId.HE, (0.5,) * 7)


class TestLoadModel:
    def test_valid_model_loads(self, dummy_path):
        handle = load_model(dummy_path)
        assert handle.input_side == 224
        assert sorted(handle.class_order) == list(EnhancerId)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_model(tmp_path / "nope.ptc")

    def test_corrupt_file(self, tmp_path):
        path = tmp_path / "garbage.ptc"
        path.write_bytes(b"\x00\x01\x02 not a model")
        with pytest.raises(ModelFormatError, match="cannot parse"):
            load_model(path)

    def test_wrong_class_count(self, tmp_path):
        path = build(tmp_path / "six.ptc", n_classes=6)
        with pytest.raises(ModelFormatError, match="class logits"):
            load_model(path)

    def test_missing_metadata(self, tmp_path):
        path = build(tmp_path / "bare.ptc", with_metadata=False)
        with pytest.raises(ModelFormatError, match="metadata"):
            load_model(path)

    def test_bad_class_order(self, tmp_path):
        model = torch.jit.script(TinyClassifier().eval())
        meta = {
            "class_order": ["he"] * 7,
            "normalization_mean": [0.5, 0.5, 0.5],
            "normalization_std": [0.5, 0.5, 0.5],
        }
        path = tmp_path / "dup.ptc"
        torch.jit.save(model, str(path), _extra_files={METADATA_FILE: json.dumps(meta)})
        with pytest.raises(ModelFormatError, match="permutation"):
            load_model(path)


class TestPredict:
    def test_probabilities_sum_to_one(self, dummy_path, photo):
        pred = predict(load_model(dummy_path), photo)
        assert abs(sum(pred.probabilities) - 1.0) < 1e-5
        assert all(p >= 0 for p in pred.probabilities)

    def test_deterministic(self, dummy_path, photo):
        handle = load_model(dummy_path)
        a = predict(handle, photo)
        b = predict(handle, photo)
        assert a == b

    def test_label_is_argmax(self, dummy_path, photo):
        pred = predict(load_model(dummy_path), photo)
        assert pred.label == int(np.argmax(pred.probabilities))

    def test_argmax_invariant_under_logit_scaling(self, dummy_path, photo):
        handle = load_model(dummy_path)
        base = predict(handle, photo)

        class Scaled(torch.nn.Module):
            def __init__(self, inner):
                super().__init__()
                self.inner = inner

            def forward(self, x):
                return 3.0 * self.inner(x) + 1.0  # strictly increasing transform

        scaled_handle = type(handle)(
            source=handle.source,
            input_side=handle.input_side,
            class_order=handle.class_order,
            normalization_mean=handle.normalization_mean,
            normalization_std=handle.normalization_std,
            module=Scaled(handle.module).eval(),
        )
        assert predict(scaled_handle, photo).label == base.label

    def test_fixture_regression_anchor(self, dummy_path):
        # stable predictions on a fixed image for the checked-in dummy model
        handle = load_model(dummy_path)
        pred = predict(handle, natural_image(42))
        again = predict(handle, natural_image(42))
        assert pred == again
        assert pred.label == int(np.argmax(pred.probabilities))


class TestOraclePredict:
    def test_one_hot(self, photo):
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (60.0,)))
        pred = oracle_predict(photo, dist, EnhancerConfig())
        assert max(pred.probabilities) == 1.0
        assert pred.probabilities[pred.label] == 1.0

    def test_agrees_with_label_sample(self, photo):
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.GAMMA_TRANSFER, (3.0,)))
        cfg = EnhancerConfig()
        label, _ = label_sample(photo, dist, cfg)
        assert oracle_predict(photo, dist, cfg).label is label
