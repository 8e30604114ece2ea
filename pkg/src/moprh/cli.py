"""Command line entry point.

Exit codes: 0 every checked identity passed, 1 at least one failed,
2 invalid config (nothing written), 3 the computation itself failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .mxcore import MoprhError
from .report import write_outputs
from .suites import build_context, run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2, 3

log = logging.getLogger("moprh")


def _parser():
    p = argparse.ArgumentParser(prog="moprh", description="Matrix biorthogonal polynomial identity checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the suites of a config and write reports")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("config", nargs="?", help="path to a JSON config")
    src.add_argument("--preset", help="name of a builtin preset")
    run.add_argument("--out", help="output directory (default: config outputs.dir or runs/<name>)")
    run.add_argument("--precision", choices=["double", "extended"])
    run.add_argument("--n-max", type=int, dest="n_max")
    run.add_argument("--jobs", type=int, default=1, help="run suites in parallel threads")

    lst = sub.add_parser("list-presets", help="list builtin presets")
    lst.add_argument("--all", action="store_true", help="also list comparison-only presets")

    show = sub.add_parser("show-preset", help="print a preset as JSON")
    show.add_argument("name")
    return p


def _load(args):
    cfg = cfgmod.preset(args.preset) if args.preset else cfgmod.load(args.config)
    cfg = cfg.with_overrides(precision=args.precision, n_max=args.n_max)
    if args.n_max is not None and not 0 <= args.n_max <= 40:
        raise cfgmod.ConfigError("n_max must be in [0, 40]")
    return cfg


def _warnings(cfg):
    out = []
    if cfg.dpi_variant == "printed":
        out.append("dPI lattice run with the recursion as displayed (gamma_{n+2} update, -mu sign); "
                   "it is expected to leave the quadrature values, see lattice.csv")
    return out


def cmd_run(args) -> int:
    try:
        cfg = _load(args)
    except (cfgmod.ConfigError, OSError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out or cfg.out_dir or Path("runs") / cfg.name)
    try:
        with np.errstate(all="ignore"):
            ctx = build_context(cfg)
            records = run_suites(ctx, jobs=max(1, args.jobs))
    except (MoprhError, np.linalg.LinAlgError) as exc:
        print(f"computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    warns = _warnings(cfg)
    report = write_outputs(out_dir, ctx, records, warns)
    s = report["summary"]
    for w in warns:
        print(f"warning: {w}", file=sys.stderr)
    print(f"{cfg.name}: {s['checked'] - s['failed']}/{s['checked']} checks passed, "
          f"{s['comparisons']} comparison records -> {out_dir}")
    for f in s["failures"]:
        print(f"  FAIL {f}")
    return EXIT_OK if s["all_pass"] else EXIT_FAIL


def cmd_list(args) -> int:
    for name, desc in cfgmod.describe_presets(include_extra=args.all):
        print(f"{name:24s} {desc}")
    return EXIT_OK


def cmd_show(args) -> int:
    try:
        print(cfgmod.dumps(cfgmod.preset(args.name)))
    except cfgmod.ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return {"run": cmd_run, "list-presets": cmd_list, "show-preset": cmd_show}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
