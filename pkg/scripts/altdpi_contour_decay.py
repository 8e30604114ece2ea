"""Boundary decay of the alt-dPI weight on both hyperbola branches and the real line.

W' = (lam + mu z + nu z^2) W gives W = exp(lam z + mu z^2/2 + nu z^3/3); the
cubic term decays along z = +-(cosh s + i sqrt(3) sinh s) only for one sign
of nu per branch.  The table prints the worst endpoint norm of W, W' - 2hW.
"""
import argparse
from dataclasses import dataclass

import numpy as np

from moprh.contour import Contour, decay_check
from moprh.pipeline import pearson
from moprh.weights import weight_eval


@dataclass
class DecayConfig:
    lam: float = 0.3
    mu: float = 0.0
    Ts: tuple = (1.0, 2.0, 3.0, 4.0)


def table(cfg: DecayConfig):
    out = []
    for nu in (1.0, -1.0):
        spec = pearson([cfg.lam, cfg.mu, nu])
        for kind, reflect in (("hyperbola", False), ("hyperbola", True), ("real-line", False)):
            for T in cfg.Ts:
                c = Contour(kind, T, reflect)
                try:
                    with np.errstate(all="ignore"):
                        rep = decay_check(weight_eval(spec, c), c)
                    worst = rep.worst if np.isfinite(rep.worst) else float("inf")
                    out.append((nu, kind + (" (x<0)" if reflect else ""), T, worst, rep.ok))
                except (OverflowError, FloatingPointError, ValueError) as exc:
                    out.append((nu, kind, T, float("inf"), False))
                    print(f"  {kind} T={T}: {exc}")
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, default=0.3)
    ap.add_argument("--mu", type=float, default=0.0)
    args = ap.parse_args()
    print(f"{'nu':>4} {'contour':18s} {'T':>4} {'worst end':>10} ok")
    for nu, kind, T, worst, ok in table(DecayConfig(args.lam, args.mu)):
        print(f"{nu:4.0f} {kind:18s} {T:4.1f} {worst:10.2e} {ok}")


if __name__ == "__main__":
    main()
