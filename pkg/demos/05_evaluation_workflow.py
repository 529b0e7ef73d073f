"""
Correlating objective scores with subjective opinion
====================================================

IQA metrics are judged by four criteria against human opinion scores:
SROCC and KROCC (rank agreement), and PLCC and RMSE after mapping the
objective scores through a fitted 5-parameter logistic curve.  This script
builds a synthetic "subjective study", runs the full benchmark harness on
CSV inputs, and shows why the logistic mapping exists.
"""

import csv

import numpy as np

from _shared import out_path
from pricce.evalstats import (
    ScorePairs,
    fit_logistic,
    krocc,
    plcc_rmse,
    run_benchmark,
    srocc,
)

rng = np.random.default_rng(0)

# ---------------------------------------------------------------------------
# Synthetic study: the "true" relationship between the objective score and
# the mean opinion score is a saturating nonlinearity plus rater noise.
n = 60
objective = np.sort(rng.uniform(0.1, 0.95, n))
subjective = 1.0 + 4.0 * np.tanh(3.0 * (objective - 0.5)) / 2.0
subjective += rng.normal(0, 0.12, n)

pairs = ScorePairs(objective, subjective)
print(f"raw Pearson: {np.corrcoef(objective, subjective)[0, 1]:.4f}")
print(f"SROCC: {srocc(pairs):.4f}   KROCC: {krocc(pairs):.4f}")

# The logistic fit linearizes the saturating relationship before PLCC/RMSE.
fit = fit_logistic(pairs)
plcc, rmse = plcc_rmse(pairs, fit)
print(f"after logistic fit: PLCC {plcc:.4f}  RMSE {rmse:.4f} "
      f"(converged={fit.converged}, beta={tuple(round(b, 3) for b in fit.beta)})")

# ---------------------------------------------------------------------------
# The same computation through the file-based harness, exactly as the
# command-line `evaluate` subcommand drives it.
mos_csv = out_path("demo_mos.csv")
scores_csv = out_path("demo_scores.csv")
with open(mos_csv, "w", newline="") as fh:
    w = csv.writer(fh)
    for i, s in enumerate(subjective):
        w.writerow([f"img{i:03d}.png", f"{s:.5f}"])
with open(scores_csv, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["path", "score", "enhancer", "fr"])
    for i, o in enumerate(objective):
        w.writerow([f"img{i:03d}.png", f"{o:.5f}", "he", "ms-ssim"])

report = run_benchmark(
    mos_csv,
    scores_csv,
    "generic",
    report_path=out_path("demo_report.json"),
    scatter_path=out_path("demo_scatter.csv"),
)
print(f"\nbenchmark report: SROCC {report.srocc:.4f}  KROCC {report.krocc:.4f}  "
      f"PLCC {report.plcc:.4f}  RMSE {report.rmse:.4f}  (n={report.n})")
print("wrote demo_report.json and demo_scatter.csv "
      "(objective, fitted, subjective per row)")
