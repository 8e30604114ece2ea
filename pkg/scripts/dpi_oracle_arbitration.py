"""Iterate both dPI recursions from the quadrature gamma_1 and compare with quadrature gamma_n.

Quartic Freud weight exp(-z^4/4 - t z^2), nu = -1, mu = -2t.  Prints one row per
(t, precision, variant) with the largest deviation and where it first exceeds 1e-4.
"""
import argparse
import logging
from dataclasses import dataclass

from moprh.painleve import lattice_vs_oracle
from moprh.pipeline import build, pearson


@dataclass
class ArbitrationConfig:
    ts: tuple = (0.0, 0.5, 1.0)
    n_double: int = 12
    n_extended: int = 14


def run(cfg: ArbitrationConfig):
    rows = []
    for t in cfg.ts:
        spec = pearson([0, -2 * t, 0, -1.0])
        for precision, n in (("double", cfg.n_double), ("extended", cfg.n_extended)):
            data = build(spec, n + 1, precision=precision).data
            for variant in ("derived", "printed"):
                c = lattice_vs_oracle(data, [[-2 * t]], n, variant)
                rows.append((t, precision, variant, n, c.max_diff, c.divergence_index, c.events))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, nargs="+", default=list(ArbitrationConfig.ts))
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)
    cfg = ArbitrationConfig(ts=tuple(args.t))
    print(f"{'t':>5} {'precision':>9} {'variant':>8} {'n_max':>5} {'max dev':>10} {'diverges':>8}  events")
    for t, prec, var, n, dev, div, ev in run(cfg):
        shown = "-" if div is None else str(div)
        evs = ", ".join(f"{e['event']}@{e['n']}" for e in ev) or "-"
        print(f"{t:5.2f} {prec:>9} {var:>8} {n:5d} {dev:10.2e} {shown:>8}  {evs}")


if __name__ == "__main__":
    main()
