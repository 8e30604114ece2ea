"""Deterministic report files: ``report.json`` plus CSV tables.

Nothing time- or host-dependent goes into the files, so two runs of the same
config produce byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .config import to_dict
from .mxcore import to_double
from .painleve import dPI_iterate


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(x.real), _clean(x.imag)]
    return x


def record_dict(r) -> dict:
    return {
        "suite": r.suite,
        "identity": r.identity,
        "paper_anchor": r.paper_anchor,
        "n": r.n,
        "residual": r.residual,
        "tolerance": r.tolerance,
        "pass": r.passed,
        "kind": r.kind,
        "note": r.note,
    }


def summarize(records) -> dict:
    blocking = [r for r in records if r.blocking]
    failed = [r for r in blocking if not r.passed]
    return {
        "records": len(records),
        "checked": len(blocking),
        "failed": len(failed),
        "comparisons": len(records) - len(blocking),
        "all_pass": not failed,
        "failures": sorted({f"{r.suite}/{r.identity}" for r in failed}),
    }


def recurrence_rows(ctx) -> list:
    d = ctx.data
    rows = []
    for n in range(ctx.cfg.n_max + 1):
        b = np.asarray(to_double(d.beta(n)), dtype=complex)
        g = np.asarray(to_double(d.gamma(n, lattice=True)), dtype=complex)
        for i in range(d.N):
            for j in range(d.N):
                rows.append([n, i, j, b[i, j].real, b[i, j].imag, g[i, j].real, g[i, j].imag])
    return rows


def lattice_rows(ctx) -> list:
    """Quadrature ``gamma_n`` next to the forward lattice iterate (dPI family only)."""
    if ctx.cfg.family != "dpi":
        return []
    d = ctx.data
    ref = d._ref()
    mu = np.asarray(ctx.cfg.hL[1], dtype=ref.dtype)
    nu = np.asarray(ctx.cfg.hL[3], dtype=ref.dtype)
    variant = ctx.cfg.dpi_variant
    run = dPI_iterate(d.gamma(1, lattice=True), mu, ctx.cfg.n_max, variant,
                      nu=None if variant == "printed" else nu, gamma0=d.gamma(0, lattice=True))
    rows = []
    for n, gl in enumerate(run.gammas):
        go = np.asarray(to_double(d.gamma(n, lattice=True)), dtype=complex)
        gl = np.asarray(to_double(gl), dtype=complex)
        for i in range(d.N):
            for j in range(d.N):
                rows.append([n, i, j, go[i, j].real, go[i, j].imag, gl[i, j].real, gl[i, j].imag])
    return rows


def build_report(ctx, records, warnings=()) -> dict:
    return _clean({
        "version": __version__,
        "config": to_dict(ctx.cfg),
        "contour": {"kind": ctx.contour.kind, "T": ctx.contour.T, "reflect": ctx.contour.reflect},
        "weight_method": ctx.weight.method,
        "samples": [complex(z) for z in ctx.samples],
        "cd_pairs": [[complex(z), complex(t)] for z, t in ctx.cd_pairs],
        "summary": summarize(records),
        "warnings": list(warnings),
        "records": [record_dict(r) for r in records],
    })


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def write_outputs(out_dir, ctx, records, warnings=()) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = build_report(ctx, records, warnings)
    files = {
        "report.json": json.dumps(report, indent=2, sort_keys=True) + "\n",
        "recurrence.csv": _csv_text(["n", "i", "j", "beta_re", "beta_im", "gamma_re", "gamma_im"],
                                    recurrence_rows(ctx)),
        "residuals.csv": _csv_text(["suite", "identity", "n", "residual", "tolerance", "pass", "kind"],
                                   [[r.suite, r.identity, r.n, r.residual, r.tolerance, r.passed, r.kind]
                                    for r in records]),
    }
    lat = lattice_rows(ctx)
    if lat:
        files["lattice.csv"] = _csv_text(["n", "i", "j", "quadrature_re", "quadrature_im", "lattice_re",
                                          "lattice_im"], lat)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    return report
