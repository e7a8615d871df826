"""Command-line entry point: ``fwfc run`` and ``fwfc eval``."""
from __future__ import annotations

import argparse
import logging
import sys

from .config import FWFCConfig, load_config
from .evaluation import average
from .pipeline import evaluate_tree, run_pipeline

log = logging.getLogger("fwfc")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fwfc", description="Wavelet-domain foreground detection for camouflaged scenes.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="segment a frame directory")
    run.add_argument("--input", required=True, help="directory of input frames")
    run.add_argument("--output", required=True, help="directory for binary masks")
    run.add_argument("--gt", help="ground-truth mask directory (enables metrics)")
    run.add_argument("--config", help="key = value configuration file")
    run.add_argument("--levels", type=int, help="decomposition depth (0 = image-domain baseline)")
    run.add_argument("--baseline", action="store_true", help="run the image-domain GMM baseline")
    run.add_argument("--report", help="CSV metrics report (needs --gt)")
    run.add_argument("--dump-bands", help="write every coefficient plane as PNG here")
    run.add_argument("--checkpoint", help="model state file: resumed if present, saved at exit")

    ev = sub.add_parser("eval", help="score existing masks against ground truth")
    ev.add_argument("--pred", required=True, help="predicted mask directory")
    ev.add_argument("--gt", required=True, help="ground-truth mask directory")
    ev.add_argument("--report", required=True, help="CSV metrics report")
    return parser


def _config(args) -> FWFCConfig:
    cfg = load_config(args.config) if args.config else FWFCConfig()
    changes = {}
    if args.levels is not None:
        changes["levels"] = args.levels
    if args.baseline:
        changes["baseline"] = True
    return cfg.replace(**changes) if changes else cfg


def _summary(results) -> str:
    m = average(results)
    return f"recall={m.recall:.4f} precision={m.precision:.4f} fmeasure={m.f_measure:.4f}"


def cmd_run(args) -> int:
    if args.report and not args.gt:
        raise ValueError("--report needs --gt")
    cfg = _config(args)
    result = run_pipeline(cfg, args.input, args.output, gt_dir=args.gt, report=args.report,
                          dump_dir=args.dump_bands, checkpoint=args.checkpoint)
    if result.frames:
        print(f"{result.name}: {result.frames} frames scored, {_summary([result])}")
    return 0


def cmd_eval(args) -> int:
    results = evaluate_tree(args.pred, args.gt, args.report)
    for r in results:
        print(f"{r.name}: {r.frames} frames, {_summary([r])}")
    if len(results) > 1:
        print(f"average: {_summary(results)}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_eval(args)
    except (OSError, ValueError) as exc:
        print(f"fwfc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
