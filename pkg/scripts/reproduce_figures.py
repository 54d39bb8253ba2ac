"""Regenerate every bundled figure preset into one output directory.

Usage: python3 scripts/reproduce_figures.py [OUTDIR] [--mc-trials N]
"""

import argparse
import sys

from vortexhop.cli import main
from vortexhop.experiment import PRESETS


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="figures")
    parser.add_argument("--mc-trials", type=int, help="MC trials per row; 0 disables MC")
    args = parser.parse_args(argv)
    extra = [] if args.mc_trials is None else ["--mc-trials", str(args.mc_trials)]
    for preset in sorted(PRESETS):
        status = main(["figure", preset, "--out", args.outdir, *extra])
        if status:
            return status
    return 0


if __name__ == "__main__":
    sys.exit(run())
