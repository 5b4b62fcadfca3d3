"""Command line entry point: ``python -m rauzy {sweep,prune,verify,oracle,render}``."""
from __future__ import annotations

import argparse
import sys

from . import report
from .sweep import EvalMode


def _common(p, n_default=13):
    p.add_argument("--n", type=int, default=n_default, help="word length (default %(default)s)")
    p.add_argument("--eval", default="edges",
                   help="vertices | edges | grid:K | samples:M (default %(default)s)")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON report path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rauzy", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="full sweep and unpruned dimension bound")
    _common(p)
    p.add_argument("--per-word-table", help="CSV of per-word statistics")

    p = sub.add_parser("prune", help="sweep plus the pruning fixed point")
    _common(p)
    p.add_argument("--per-word-table", help="CSV of per-word statistics")
    p.add_argument("--retained-words", help="final word list, one per line")
    p.add_argument("--trace", help="per-round CSV trace")

    p = sub.add_parser("verify", help="interior sampling check of the per-word extrema")
    _common(p)
    p.add_argument("--words", type=int, default=1000)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("oracle", help="finite-difference cross-check for small n")
    _common(p, n_default=3)

    p = sub.add_parser("render", help="raster image of the gasket")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--width", type=int, default=1024)
    p.add_argument("--out", required=True, help=".pgm or .png path")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            report.cmd_render(args.depth, args.width, args.out)
            return report.EXIT_OK
        mode = EvalMode.parse(args.eval)
        if mode.kind == "samples":
            mode = EvalMode("samples", mode.k, args.seed)
        cfg = report.RunConfig(
            n=args.n, eval_mode=mode, arithmetic=args.mode, workers=args.workers,
            seed=args.seed, out=args.out,
            per_word_table=getattr(args, "per_word_table", None),
            retained_words=getattr(args, "retained_words", None),
            trace=getattr(args, "trace", None),
            verify_words=getattr(args, "words", 1000),
            verify_points=getattr(args, "samples", 1000),
        )
        cmd = {"sweep": report.cmd_sweep, "prune": report.cmd_prune,
               "verify": report.cmd_verify, "oracle": report.cmd_oracle}[args.command]
        doc, code = cmd(cfg)
    except (ValueError, OverflowError) as exc:
        print(f"rauzy: error: {exc}", file=sys.stderr)
        return report.EXIT_CONFIG
    if not args.out:
        sys.stdout.write(report.dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
