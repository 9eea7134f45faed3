"""Command-line front end: plots <kind> --in RUNDIR --out FILE."""

import argparse
import sys

from . import __version__
from .figures import FIGURE_KINDS, PlotInputError, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from a run directory")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="indir", required=True,
                        help="run directory produced by `cohabitat run`")
    parser.add_argument("--out", required=True,
                        help="output image path (.png or .svg)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed whose tick log to draw "
                             "(default: first in manifest)")
    parser.add_argument("--arm", choices=("with", "without"), default="with")
    parser.add_argument("--episode", type=int, default=0)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        render(args.kind, args.indir, args.out, seed=args.seed,
               arm=args.arm, episode=args.episode)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
