"""Benchmark evaluation: rank correlations, VQEG logistic mapping, loaders.

The protocol is the standard IQA comparison recipe: SROCC/KROCC measure
prediction monotonicity on raw scores; a 5-parameter monotone logistic is
fitted between objective and subjective scores, and PLCC/RMSE are computed
on the fitted values.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import optimize
from scipy.stats import rankdata


@dataclass(frozen=True)
class ScorePairs:
    objective: np.ndarray
    subjective: np.ndarray
    subjective_is_dmos: bool = False

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=np.float64)
        subj = np.asarray(self.subjective, dtype=np.float64)
        if obj.shape != subj.shape or obj.ndim != 1:
            raise ValueError("objective/subjective must be equal-length vectors")
        if obj.size < 2:
            raise ValueError(f"need at least 2 pairs, got {obj.size}")
        if not (np.isfinite(obj).all() and np.isfinite(subj).all()):
            raise ValueError("scores contain NaN or Inf")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "subjective", subj)

    @property
    def n(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LogisticFit:
    beta: tuple  # beta1..beta5
    converged: bool
    iterations: int

    def __call__(self, s: np.ndarray) -> np.ndarray:
        return logistic5(np.asarray(s, dtype=np.float64), *self.beta)


@dataclass(frozen=True)
class EvalReport:
    srocc: float
    krocc: float
    plcc: float
    rmse: float
    fit: LogisticFit
    dataset_name: str
    n: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "dataset": self.dataset_name,
                "n": self.n,
                "srocc": self.srocc,
                "krocc": self.krocc,
                "plcc": self.plcc,
                "rmse": self.rmse,
                "fit_beta": list(self.fit.beta),
                "fit_converged": self.fit.converged,
                "fit_iterations": self.fit.iterations,
            },
            indent=2,
        )


def _check_not_constant(v: np.ndarray, name: str) -> None:
    if np.all(v == v[0]):
        raise ValueError(f"{name} vector is constant; correlation undefined")


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a @ a) * (b @ b))
    if denom == 0.0:
        raise ValueError("constant vector; correlation undefined")
    return float(np.clip((a @ b) / denom, -1.0, 1.0))


def srocc(pairs: ScorePairs) -> float:
    """Spearman rank correlation (average ranks for ties)."""
    _check_not_constant(pairs.objective, "objective")
    _check_not_constant(pairs.subjective, "subjective")
    return _pearson(rankdata(pairs.objective), rankdata(pairs.subjective))


def krocc(pairs: ScorePairs) -> float:
    """Kendall tau-b by direct pair enumeration (fine at benchmark sizes)."""
    x, y = pairs.objective, pairs.subjective
    _check_not_constant(x, "objective")
    _check_not_constant(y, "subjective")
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    iu = np.triu_indices(x.size, k=1)
    sx, sy = sx[iu], sy[iu]
    concordant_minus_discordant = float(np.sum(sx * sy))
    n_pairs = sx.size
    tied_x = float(np.sum(sx == 0))
    tied_y = float(np.sum(sy == 0))
    denom = np.sqrt((n_pairs - tied_x) * (n_pairs - tied_y))
    if denom == 0.0:
        raise ValueError("all pairs tied; tau-b undefined")
    return float(np.clip(concordant_minus_discordant / denom, -1.0, 1.0))


def logistic5(s: np.ndarray, b1: float, b2: float, b3: float, b4: float, b5: float) -> np.ndarray:
    """VQEG 5-parameter monotone mapping used before PLCC/RMSE."""
    return b1 * (0.5 - 1.0 / (1.0 + np.exp(b2 * (s - b3)))) + b4 * s + b5


def fit_logistic(pairs: ScorePairs, max_iterations: int = 5000) -> LogisticFit:
    """Least-squares fit of the 5-parameter logistic mapping."""
    if pairs.n < 5:
        raise ValueError(f"logistic fit needs at least 5 points, got {pairs.n}")
    obj, subj = pairs.objective, pairs.subjective
    std = obj.std()
    beta0 = np.array(
        [
            subj.max() - subj.min(),
            1.0 / std if std > 0 else 1.0,
            obj.mean(),
            0.0,
            subj.mean(),
        ]
    )

    def residuals(beta):
        return logistic5(obj, *beta) - subj

    result = optimize.least_squares(
        residuals, beta0, method="lm", max_nfev=max_iterations, ftol=1e-8, xtol=1e-12
    )
    converged = bool(result.status > 0 and np.isfinite(result.x).all())
    return LogisticFit(beta=tuple(result.x), converged=converged, iterations=int(result.nfev))


def plcc_rmse(pairs: ScorePairs, fit: LogisticFit) -> tuple[float, float]:
    """Pearson correlation and RMSE of fitted objective vs subjective."""
    fitted = fit(pairs.objective)
    plcc = _pearson(fitted, pairs.subjective)
    rmse = float(np.sqrt(np.mean((fitted - pairs.subjective) ** 2)))
    return plcc, rmse


# ---------------------------------------------------------------------------
# benchmark MOS loaders


def load_mos_csv(path: str | Path) -> dict[str, float]:
    """Generic two-column loader: ``image_name,score`` with optional header."""
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or len(row) < 2:
                continue
            try:
                score = float(row[1])
            except ValueError:
                continue  # header line
            out[Path(row[0]).name] = score
    if not out:
        raise ValueError(f"{path}: no (name, score) rows found")
    return out


def load_mos_tid2013(path: str | Path, contrast_subset: bool = True) -> dict[str, float]:
    """TID2013 ``mos_with_names.txt``: lines of ``<mos> <filename>``.

    With ``contrast_subset`` only distortion types 16 (contrast change) and
    17 (mean shift) are kept, the evaluation subset used for this metric.
    """
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) != 2:
                continue
            score, name = float(parts[0]), parts[1]
            if contrast_subset:
                fields = Path(name).stem.split("_")
                if len(fields) < 3 or fields[1] not in ("16", "17"):
                    continue
            out[Path(name).name] = score
    if not out:
        raise ValueError(f"{path}: no MOS entries found")
    return out


def load_mos(path: str | Path, dataset: str) -> tuple[dict[str, float], bool]:
    """Returns (name -> subjective score, is_dmos) for a named benchmark."""
    dataset = dataset.lower()
    if dataset == "tid2013":
        return load_mos_tid2013(path), False
    if dataset == "csiq":
        return load_mos_csv(path), True  # CSIQ publishes DMOS
    if dataset in ("ccid2014", "generic"):
        return load_mos_csv(path), False
    raise ValueError(f"unknown dataset {dataset!r} (use tid2013/csiq/ccid2014/generic)")


def load_scores_csv(path: str | Path) -> tuple[dict[str, float], str]:
    """Read a score-batch CSV (``path,score,enhancer,fr``); returns the
    name -> score map and the FR metric key used."""
    out = {}
    fr_key = ""
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "path":
                continue
            out[Path(row[0]).name] = float(row[1])
            if len(row) >= 4:
                fr_key = row[3]
    if not out:
        raise ValueError(f"{path}: no score rows found")
    return out, fr_key


def run_benchmark(
    mos_path: str | Path,
    scores_path: str | Path,
    dataset_name: str,
    report_path: str | Path | None = None,
    scatter_path: str | Path | None = None,
) -> EvalReport:
    """Join objective scores with subjective scores and compute all criteria.

    Polarity is normalized before correlation: DMOS is negated, and
    GMSD-based objective scores are negated, so that higher always means
    better on both axes.
    """
    mos, is_dmos = load_mos(mos_path, dataset_name)
    scores, fr_key = load_scores_csv(scores_path)

    missing = [name for name in scores if name not in mos]
    if missing:
        shown = ", ".join(missing[:10])
        raise ValueError(
            f"{len(missing)} scored images have no subjective score; first: {shown}"
        )

    names = sorted(scores)
    objective = np.array([scores[n] for n in names])
    subjective = np.array([mos[n] for n in names])
    if fr_key == "gmsd":
        objective = -objective
    if is_dmos:
        subjective = -subjective

    pairs = ScorePairs(objective, subjective, subjective_is_dmos=is_dmos)
    fit = fit_logistic(pairs)
    if fit.converged:
        plcc, rmse = plcc_rmse(pairs, fit)
    else:
        plcc = _pearson(pairs.objective, pairs.subjective)
        rmse = float(np.sqrt(np.mean((pairs.objective - pairs.subjective) ** 2)))
    report = EvalReport(
        srocc=srocc(pairs),
        krocc=krocc(pairs),
        plcc=plcc,
        rmse=rmse,
        fit=fit,
        dataset_name=dataset_name,
        n=pairs.n,
    )
    if report_path is not None:
        Path(report_path).write_text(report.to_json() + "\n", encoding="utf-8")
    if scatter_path is not None:
        fitted = fit(pairs.objective)
        with open(scatter_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["objective", "fitted", "subjective"])
            for o, f, s in zip(pairs.objective, fitted, pairs.subjective):
                writer.writerow([f"{o:.8g}", f"{f:.8g}", f"{s:.8g}"])
    return report
