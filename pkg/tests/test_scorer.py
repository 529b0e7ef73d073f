from pathlib import Path

import numpy as np
import pytest

from conftest import natural_image
from fixtures.make_dummy_model import build
from pricce.classifier import load_model, oracle_predict
from pricce.distort import DistortionFamily, DistortionSpec, apply_distortion
from pricce.enhance import EnhancerConfig, enhance
from pricce.imgcore import load_image
from pricce.metrics import MetricId, compare
from pricce.scorer import StageError, pricce_score, pricce_score_oracle

FIXTURES = Path(__file__).parent / "fixtures"
CFG = EnhancerConfig()


@pytest.fixture(scope="module")
def model(tmp_path_factory):
    path = FIXTURES / "dummy_model.ptc"
    if not path.exists():
        path = build(tmp_path_factory.mktemp("model") / "dummy_model.ptc")
    return load_model(path)


class TestPricceScore:
    def test_deterministic(self, model, photo):
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (40.0,)))
        a = pricce_score(dist, model, MetricId.MSSSIM, CFG)
        b = pricce_score(dist, model, MetricId.MSSSIM, CFG)
        assert a.score == b.score and a.chosen_enhancer is b.chosen_enhancer

    def test_score_recomputable_from_pseudo_ref(self, model, photo, tmp_path):
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.GAMMA_TRANSFER, (2.0,)))
        dump = tmp_path / "pseudo.png"
        result = pricce_score(dist, model, MetricId.MSSSIM, CFG, dump_pseudo=dump)
        pseudo = load_image(dump)
        assert compare(pseudo, dist, MetricId.MSSSIM).value == pytest.approx(
            result.score, abs=1e-12
        )

    def test_identity_enhancer_yields_ideal_score(self, model, photo):
        # if the chosen enhancer returns the input unchanged, the score is
        # the metric's ideal value; construct that case directly
        pseudo = enhance(photo, model.class_order[0], CFG)
        if np.array_equal(pseudo.pixels, photo.pixels):
            assert compare(pseudo, photo, MetricId.MSSSIM).value == pytest.approx(1.0)
        else:
            assert compare(photo, photo, MetricId.MSSSIM).value == pytest.approx(1.0)

    def test_result_records_metric_and_prediction(self, model, photo):
        result = pricce_score(photo, model, MetricId.SSIM, CFG)
        assert result.fr_metric is MetricId.SSIM
        assert result.chosen_enhancer is result.prediction.label


class TestPricceScoreOracle:
    def test_matches_model_path_when_predictions_agree(self, model, photo):
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (40.0,)))
        oracle_result = pricce_score_oracle(dist, photo, MetricId.MSSSIM, CFG)
        model_result = pricce_score(dist, model, MetricId.MSSSIM, CFG)
        if model_result.chosen_enhancer is oracle_result.chosen_enhancer:
            assert model_result.score == pytest.approx(oracle_result.score, abs=1e-12)

    def test_reference_isolated_from_score(self, photo):
        # any reference with the same oracle label yields the same score
        dist = apply_distortion(photo, DistortionSpec(DistortionFamily.MEAN_SHIFT, (60.0,)))
        result = pricce_score_oracle(dist, photo, MetricId.MSSSIM, CFG)
        other_ref = natural_image(99)
        other = pricce_score_oracle(dist, other_ref, MetricId.MSSSIM, CFG)
        if other.chosen_enhancer is result.chosen_enhancer:
            assert other.score == pytest.approx(result.score, abs=1e-12)

    def test_mean_shift_ladder_scores_non_increasing(self):
        img = natural_image(1)
        scores = []
        for delta in (20.0, 40.0, 60.0, 80.0, 100.0):
            dist = apply_distortion(img, DistortionSpec(DistortionFamily.MEAN_SHIFT, (delta,)))
            scores.append(pricce_score_oracle(dist, img, MetricId.MSSSIM, CFG).score)
        assert all(a >= b for a, b in zip(scores, scores[1:]))

    def test_gmsd_polarity_negation_restores_monotonicity(self):
        # the harness must negate GMSD scores; verify the raw scores run the
        # opposite way on a monotone distortion ladder
        img = natural_image(2)
        gmsd_scores, msssim_scores = [], []
        for delta in (20.0, 60.0, 100.0):
            dist = apply_distortion(img, DistortionSpec(DistortionFamily.MEAN_SHIFT, (delta,)))
            gmsd_scores.append(pricce_score_oracle(dist, img, MetricId.GMSD, CFG).score)
            msssim_scores.append(pricce_score_oracle(dist, img, MetricId.MSSSIM, CFG).score)
        assert msssim_scores[0] > msssim_scores[-1]
        assert -gmsd_scores[0] > -gmsd_scores[-1]


class TestStageErrors:
    def test_classify_stage_error(self, photo):
        class BrokenModel:
            source = "broken"

        with pytest.raises(StageError) as err:
            pricce_score(photo, BrokenModel())
        assert err.value.stage == "classify"

    def test_oracle_classify_stage_error(self, photo):
        constant = natural_image(0)
        constant = type(constant)(np.full_like(constant.pixels, 100))
        with pytest.raises(StageError) as err:
            pricce_score_oracle(photo, constant, MetricId.MSSSIM, CFG)
        assert err.value.stage == "classify"
