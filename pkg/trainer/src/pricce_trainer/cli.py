"""Command-line front end for training and evaluation.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from pricce_trainer.manifest import ManifestError

log = logging.getLogger("pricce_trainer")

USAGE_ERROR = 1
DATA_ERROR = 2
INTERNAL_ERROR = 3


def _cmd_train(args) -> int:
    from pricce_trainer.train import TrainConfig, train

    cfg = TrainConfig(
        manifest_path=args.manifest,
        out_path=args.out,
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr=args.lr,
        val_fraction=args.val_fraction,
        patience=args.patience,
        seed=args.seed,
        pretrained=not args.no_pretrained,
        margin_weighting=args.margin_weighting,
    )
    report = train(cfg)
    print(report.to_json())
    return 0


def _cmd_evaluate(args) -> int:
    from pricce_trainer.evaluate import evaluate_model

    confusion, accuracy = evaluate_model(args.model, args.manifest, out_csv=args.out)
    print(f"accuracy {accuracy:.4f}")
    for row in confusion:
        print(" ".join(f"{v:5d}" for v in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pricce-train", description=__doc__)
    parser.add_argument("--log-level", default="info",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("train", help="train from a manifest and export the model")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="output model path (.ptc)")
    p.add_argument("--epochs", type=int, default=150)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--patience", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-pretrained", action="store_true",
                   help="skip ImageNet weights (e.g. offline)")
    p.add_argument("--margin-weighting", action="store_true",
                   help="weight samples by label margin (non-standard)")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="confusion matrix + accuracy on a manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="write the confusion matrix as CSV")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        return USAGE_ERROR
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
    except (ManifestError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return DATA_ERROR
    except Exception as exc:  # pragma: no cover
        log.exception("internal error: %s", exc)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
