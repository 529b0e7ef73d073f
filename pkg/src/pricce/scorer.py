"""The PRICCE score: classify, enhance into a pseudo-reference, compare.

The returned score is the raw full-reference metric value between the
pseudo-reference and the distorted input; polarity normalization (GMSD is
lower-is-better) belongs to the evaluation harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from pricce.classifier import ModelHandle, Prediction, oracle_predict, predict
from pricce.enhance import EnhancerConfig, EnhancerId, enhance
from pricce.imgcore import RasterImage, save_image
from pricce.metrics import MetricId, compare


class StageError(RuntimeError):
    """Pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.__cause__ = cause


@dataclass(frozen=True)
class PricceResult:
    score: float
    chosen_enhancer: EnhancerId
    fr_metric: MetricId
    prediction: Prediction
    pseudo_ref_path: Path | None = None


def _score_with_prediction(
    dist: RasterImage,
    prediction: Prediction,
    fr: MetricId,
    cfg: EnhancerConfig | None,
    dump_pseudo: Path | None,
) -> PricceResult:
    try:
        pseudo_ref = enhance(dist, prediction.label, cfg)
    except Exception as exc:
        raise StageError("enhance", exc) from exc
    try:
        score = compare(pseudo_ref, dist, fr).value
    except Exception as exc:
        raise StageError("compare", exc) from exc
    pseudo_path = None
    if dump_pseudo is not None:
        pseudo_path = Path(dump_pseudo)
        save_image(pseudo_ref, pseudo_path)
    return PricceResult(
        score=score,
        chosen_enhancer=prediction.label,
        fr_metric=fr,
        prediction=prediction,
        pseudo_ref_path=pseudo_path,
    )


def pricce_score(
    dist: RasterImage,
    model: ModelHandle,
    fr: MetricId = MetricId.MSSSIM,
    cfg: EnhancerConfig | None = None,
    dump_pseudo: Path | None = None,
) -> PricceResult:
    """No-reference score: the trained classifier picks the enhancer."""
    try:
        prediction = predict(model, dist)
    except Exception as exc:
        raise StageError("classify", exc) from exc
    return _score_with_prediction(dist, prediction, fr, cfg, dump_pseudo)


def pricce_score_oracle(
    dist: RasterImage,
    ref: RasterImage,
    fr: MetricId = MetricId.MSSSIM,
    cfg: EnhancerConfig | None = None,
    dump_pseudo: Path | None = None,
) -> PricceResult:
    """Reference-assisted upper bound: the oracle picks the enhancer.

    The reference is used only to select the enhancer; the score itself is
    still computed between the pseudo-reference and the distorted input.
    """
    try:
        prediction = oracle_predict(ref, dist, cfg)
    except Exception as exc:
        raise StageError("classify", exc) from exc
    return _score_with_prediction(dist, prediction, fr, cfg, dump_pseudo)
