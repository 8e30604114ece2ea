"""Side-by-side residuals for formulas that have a commonly displayed and a derived form.

Each row evaluates both forms on the same quadrature data.  The derived form
should sit at roundoff, the displayed one at O(1e-2) or worse.
"""
import argparse
import logging

import numpy as np

from moprh import odesys
from moprh.painleve import altdPI_residual, lattice_vs_oracle
from moprh.pipeline import build, pearson
from moprh.rhframe import closed_form_residual, dpi_structure

A = np.array([[0, 1], [0, 0]], dtype=complex)
I2 = np.eye(2)
Z, T = 0.5 + 1.5j, -0.4 - 2.1j


def rows(n_max=5):
    mh2 = build(pearson([A, -I2], [A.T, -I2]), n_max + 4, T=9.0)
    F = mh2.frames()
    out = []
    for n in range(1, n_max + 1):
        r0, r1 = F.cd_residuals(n, Z, T), F.cd_residuals(n, Z, T, printed_qq=True)
        out.append(("CD QQ (boundary term)", n, r0["CD QQ"], r1["CD QQ"]))
        s0 = odesys.split_sylvester_residuals(F, n, Z)
        s1 = odesys.split_sylvester_residuals(F, n, Z, printed_q_sign=True)
        out.append(("Sylvester Q rows sign", n, max(s0.values()), max(v for k, v in s1.items() if "Q" in k)))
        e0 = odesys.split_second_order_residuals(F, n, Z)
        e1 = odesys.split_second_order_residuals(F, n, Z, drop_C=True)
        out.append(("second order C_{n-1} coupling", n, max(e0.values()), max(e1.values())))
        a = np.diag([-2.0, 0.0])
        q0 = odesys.second_kind_eigen_residuals(F, n, Z, a, a)
        q1 = odesys.second_kind_eigen_residuals(F, n, Z, a, a, sign=+1)
        out.append(("Q eigen alpha -/+ 2A", n, max(q0.values()), max(q1.values())))
    ns = build(pearson([A, -I2], [np.array([[0.3, 0], [0.5, 0]]), -I2]), n_max + 4, T=9.0).frames()
    for n in range(1, n_max + 1):
        rel = ns.coefficient_relations(n)
        mixed = max(rel[k][0] for k in ("p1 right", "p2 right", "q1 right"))
        same = max(v[1] for v in rel.values())
        out.append(("right p/q relations labels", n, same, mixed))
    fr = build(pearson([0, 0, 0, -1.0]), n_max + 4).frames()
    for n in range(1, n_max + 1):
        out.append(("dPI closed form mu/nu (t=0)", n, closed_form_residual(fr, n, dpi_structure(fr, n, 0, -1)),
                    closed_form_residual(fr, n, dpi_structure(fr, n, 0, -1, "printed"))))
    alt = build(pearson([0.3, 0.4, 1.0]), n_max + 2, kind="hyperbola", precision="extended").data
    for n in range(n_max + 1):
        out.append(("alt-dPI second equation", n, altdPI_residual(alt, 0.3, 0.4, 1.0, n)["alt-dPI second"],
                    altdPI_residual(alt, 0.3, 0.4, 1.0, n, "printed")["alt-dPI second"]))
    fd = build(pearson([0, -1.0, 0, -1.0]), 12).data
    d0, d1 = lattice_vs_oracle(fd, [[-1.0]], 10), lattice_vs_oracle(fd, [[-1.0]], 10, "printed")
    out.append(("dPI lattice (t=0.5), n<=10", 10, d0.max_diff, d1.max_diff))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=5)
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)
    print(f"{'formula':34s} {'n':>3} {'derived':>10} {'displayed':>10}")
    for name, n, good, bad in rows(args.n_max):
        print(f"{name:34s} {n:3d} {good:10.2e} {bad:10.2e}")


if __name__ == "__main__":
    main()
