"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
Machine-readable results go to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from pricce import __version__
from pricce.distort import (
    CATALOG_VERSION,
    DistortionFamily,
    DistortionSpec,
    _PARAM_SETS,
    apply_distortion,
    format_catalog,
)
from pricce.enhance import EnhancerConfig, EnhancerId, enhance
from pricce.imgcore import ImageDataError, load_image, save_image
from pricce.metrics import MetricId, compare

log = logging.getLogger("pricce")

USAGE_ERROR = 1
DATA_ERROR = 2
INTERNAL_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _load_config(path: str | None) -> EnhancerConfig:
    if not path:
        return EnhancerConfig()
    with open(path, encoding="utf-8") as fh:
        overrides = json.load(fh)
    base = EnhancerConfig().to_dict()
    unknown = set(overrides) - set(base)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    base.update(overrides)
    return EnhancerConfig.from_dict(base)


def _default_jobs() -> int:
    env = os.environ.get("PRICCE_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _cmd_distort(args) -> int:
    if args.list:
        print(format_catalog())
        return 0
    if not (args.family and args.out and getattr(args, "in_path", None)):
        raise SystemExit(USAGE_ERROR)
    family = DistortionFamily(args.family)
    presets = _PARAM_SETS[family]
    if not 0 <= args.level < len(presets):
        raise ValueError(
            f"{family.value} has levels 0..{len(presets) - 1}, got {args.level}"
        )
    spec = DistortionSpec(family, presets[args.level])
    img = load_image(args.in_path)
    save_image(apply_distortion(img, spec), args.out)
    return 0


def _cmd_enhance(args) -> int:
    cfg = _load_config(args.config)
    algo = EnhancerId.from_key(args.algo)
    img = load_image(args.in_path)
    save_image(enhance(img, algo, cfg), args.out)
    return 0


def _cmd_compare(args) -> int:
    metric = MetricId.from_key(args.metric)
    ref = load_image(args.ref)
    test = load_image(args.test)
    score = compare(ref, test, metric)
    print(f"{score.value:.6f}")
    return 0


def _cmd_gen_dataset(args) -> int:
    from pricce.dataset import generate

    cfg = _load_config(args.config)
    manifest = generate(args.refs, args.out, cfg, jobs=args.jobs)
    log.info("generated %d records", len(manifest.records))
    print(len(manifest.records))
    return 0


def _cmd_audit_manifest(args) -> int:
    from pricce.dataset import audit_manifest

    problems = audit_manifest(args.manifest)
    for p in problems:
        print(p)
    if problems:
        log.error("%d invariant violations", len(problems))
        return DATA_ERROR
    print("ok")
    return 0


def _cmd_classify(args) -> int:
    from pricce.classifier import load_model, predict

    handle = load_model(args.model)
    img = load_image(args.in_path)
    pred = predict(handle, img)
    probs = " ".join(f"{p:.6f}" for p in pred.probabilities)
    print(f"{pred.label.key} {probs}")
    return 0


def _cmd_score(args) -> int:
    from pricce.classifier import load_model
    from pricce.scorer import pricce_score

    cfg = _load_config(args.config)
    handle = load_model(args.model)
    img = load_image(args.in_path)
    result = pricce_score(
        img,
        handle,
        fr=MetricId.from_key(args.fr),
        cfg=cfg,
        dump_pseudo=Path(args.dump_pseudo) if args.dump_pseudo else None,
    )
    print(f"{result.score:.6f}")
    log.info("chosen enhancer: %s", result.chosen_enhancer.key)
    return 0


def _cmd_score_batch(args) -> int:
    from pricce.classifier import load_model
    from pricce.scorer import pricce_score

    cfg = _load_config(args.config)
    handle = load_model(args.model)
    fr = MetricId.from_key(args.fr)
    paths = [
        line.strip()
        for line in Path(args.list).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not paths:
        raise ValueError(f"{args.list}: empty image list")
    tmp = Path(args.out).with_name(Path(args.out).name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path", "score", "enhancer", "fr"])
        for path in paths:
            img = load_image(path)
            result = pricce_score(img, handle, fr=fr, cfg=cfg)
            writer.writerow([path, f"{result.score:.8g}", result.chosen_enhancer.key, fr.value])
    tmp.replace(args.out)
    return 0


def _cmd_evaluate(args) -> int:
    from pricce.evalstats import run_benchmark

    report = run_benchmark(
        args.mos,
        args.scores,
        args.dataset,
        report_path=args.report,
        scatter_path=args.scatter,
    )
    print(report.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pricce", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"pricce {__version__} (catalog {CATALOG_VERSION})",
    )
    parser.add_argument("--log-level", default="warning", choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("distort", help="apply a catalog distortion preset")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--family", choices=[f.value for f in DistortionFamily])
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--list", action="store_true", help="print the preset catalog")
    p.set_defaults(func=_cmd_distort)

    p = sub.add_parser("enhance", help="run one contrast-enhancement algorithm")
    p.add_argument("--algo", required=True, choices=[e.key for e in EnhancerId])
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=_cmd_enhance)

    p = sub.add_parser("compare", help="full-reference metric between two images")
    p.add_argument("--metric", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("gen-dataset", help="build the labeled training corpus")
    p.add_argument("--refs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--config")
    p.set_defaults(func=_cmd_gen_dataset)

    p = sub.add_parser("audit-manifest", help="re-check manifest label invariants")
    p.add_argument("manifest")
    p.set_defaults(func=_cmd_audit_manifest)

    p = sub.add_parser("classify", help="predict the best enhancer for an image")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("score", help="PRICCE quality score for one image")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--fr", default="ms-ssim")
    p.add_argument("--dump-pseudo")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("score-batch", help="score a list of images to CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--list", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fr", default="ms-ssim")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_score_batch)

    p = sub.add_parser("evaluate", help="correlate scores with subjective data")
    p.add_argument("--dataset", required=True)
    p.add_argument("--mos", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--report")
    p.add_argument("--scatter")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise  # --help / --version
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except (ImageDataError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return DATA_ERROR
    except Exception as exc:  # pragma: no cover
        log.exception("internal error: %s", exc)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
