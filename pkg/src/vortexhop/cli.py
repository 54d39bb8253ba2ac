"""Command line entry point ``vortexhop``.

Exit status: 0 on success, 2 for an invalid config, 3 when a computed BER
fails its sanity checks.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, NumericalDiagnostic, VortexHopError
from .experiment import PRESETS, emit_csv, load_spec, preset_paths, run_experiment
from .mc import McConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _run_spec(spec, outdir: Path | None, quiet: bool) -> list[Path]:
    start = time.perf_counter()
    rows = run_experiment(spec)
    base = outdir if outdir is not None else (spec.source.parent if spec.source else Path.cwd())
    written = [emit_csv(rows, base / (spec.csv or f"{spec.name}.csv"))]
    if spec.plot:
        from .plots import plot_rows

        written.append(plot_rows(rows, base / spec.plot, title=spec.name))
    if not quiet:
        elapsed = time.perf_counter() - start
        print(f"{spec.name}: {len(rows)} rows in {elapsed:.1f} s -> {', '.join(str(p) for p in written)}")
    return written


def _override_mc(spec, trials: int | None, seed: int | None):
    if trials is None and seed is None:
        return spec
    if trials == 0:
        return replace(spec, mc=None)
    current = spec.mc or McConfig(trials=trials or 20000)
    return replace(
        spec,
        mc=McConfig(
            trials=trials if trials is not None else current.trials,
            seed=seed if seed is not None else current.seed,
            fidelity=current.fidelity,
        ),
    )


def cmd_run(args) -> int:
    spec = load_spec(args.config)
    spec = _override_mc(spec, args.mc_trials, args.seed)
    _run_spec(spec, Path(args.out) if args.out else None, args.quiet)
    return EXIT_OK


def cmd_figure(args) -> int:
    outdir = Path(args.out)
    for path in preset_paths(args.preset):
        spec = _override_mc(load_spec(path), args.mc_trials, args.seed)
        if args.no_plot:
            spec = replace(spec, plot=None)
        _run_spec(spec, outdir, args.quiet)
    return EXIT_OK


def cmd_validate(args) -> int:
    spec = load_spec(args.config)
    points = len(spec.schemes) * len(spec.mus) * len(spec.hops) * len(spec.grid) * max(1, len(spec.grid2))
    mc = "off" if spec.mc is None else f"{spec.mc.trials} trials, {spec.mc.fidelity.value}"
    print(f"{args.config}: ok ({points} rows, MC {mc})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vortexhop", description="Anti-jamming BER sweeps for OAM mode hopping.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a sweep config and write its CSV (and plot)")
    run.add_argument("config")
    run.add_argument("--out", help="output directory (default: next to the config)")
    run.add_argument("--mc-trials", type=int, help="override MC trials per row; 0 disables MC")
    run.add_argument("--seed", type=int, help="override the MC seed")
    run.add_argument("-q", "--quiet", action="store_true")
    run.set_defaults(func=cmd_run)

    fig = sub.add_parser("figure", help="reproduce a bundled figure preset")
    fig.add_argument("preset", choices=sorted(PRESETS))
    fig.add_argument("--out", required=True, help="output directory")
    fig.add_argument("--mc-trials", type=int, help="override MC trials per row; 0 disables MC")
    fig.add_argument("--seed", type=int, help="override the MC seed")
    fig.add_argument("--no-plot", action="store_true", help="write CSVs only")
    fig.add_argument("-q", "--quiet", action="store_true")
    fig.set_defaults(func=cmd_figure)

    val = sub.add_parser("validate", help="check a sweep config without running it")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDiagnostic as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VortexHopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
