"""Run every builtin preset through the CLI and print a one-line summary each."""
import argparse
import json
import sys
import time
from pathlib import Path

from moprh import config as cfgmod
from moprh.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs")
    ap.add_argument("--precision", choices=["double", "extended"])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--all", action="store_true", help="include comparison-only presets")
    args = ap.parse_args()
    worst = 0
    for name in cfgmod.preset_names(args.all):
        out = Path(args.out) / name
        argv = ["run", "--preset", name, "--out", str(out), "--jobs", str(args.jobs)]
        if args.precision:
            argv += ["--precision", args.precision]
        t0 = time.perf_counter()
        code = cli_main(argv)
        dt = time.perf_counter() - t0
        worst = max(worst, code)
        if code in (0, 1):
            s = json.loads((out / "report.json").read_text())["summary"]
            print(f"== {name}: exit {code}, {s['checked'] - s['failed']}/{s['checked']} in {dt:.1f}s")
        else:
            print(f"== {name}: exit {code} in {dt:.1f}s")
    sys.exit(worst)


if __name__ == "__main__":
    main()
