"""Verification suites driven by an :class:`ExperimentConfig`.

Each suite returns a list of :class:`Record`.  ``identity`` records must pass;
``comparison`` records document alternative readings of a formula and never
fail a run; ``detector`` records pass when a deliberately corrupted input is
caught (residual above the threshold).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

import numpy as np

from . import odesys, painleve
from .biorth import biorthogonality_residual, recurrence_residual
from .config import SUITES, ExperimentConfig
from .contour import Contour, decay_check
from .mxcore import MatrixPoly, norm, to_double
from .pipeline import build
from .rhframe import Frames, altdpi_structure, closed_form_residual, dpi_structure, hermite_structure
from .weights import (
    PearsonSpec,
    pearson_residual,
    second_order_weight_residual,
    second_order_weight_residual_right,
)

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = (0.5 + 1.5j, -1.2 + 0.8j, 2.5j, 1.5 - 1.2j, -0.4 - 2.1j)
SAMPLE_CLEARANCE = 0.5
ODE_SAMPLES = 3
CD_PAIRS = 5
JUMP_POINTS = (0.3, -0.45)

DEFAULT_TOL = {
    "boundary-decay": 1e-8,
    "pearson": 1e-8,
    "pearson-second-order": 1e-6,
    "biorthogonality": 1e-8,
    "three-term-left": 1e-8,
    "three-term-right": 1e-8,
    "hermite-oracle-beta": 1e-10,
    "hermite-oracle-gamma": 1e-8,
    "det-left": 1e-8,
    "det-right": 1e-8,
    "transfer-det": 1e-10,
    "transfer-step-left": 1e-8,
    "transfer-step-right": 1e-8,
    "transfer-similarity": 1e-10,
    "inverse-relation": 1e-7,
    "inverse-corollaries": 1e-7,
    "constant-jump-left": 1e-4,
    "constant-jump-right": 1e-4,
    "structure-mirror": 1e-9,
    "structure-closed-form": 1e-8,
    "zero-curvature": 1e-8,
    "second-order-zero-curvature": 1e-8,
    "higher-order-zero-curvature": 1e-8,
    "coefficient-relation": 1e-8,
    "cd": 1e-7,
    "sylvester-left": 1e-6,
    "sylvester-right": 1e-6,
    "sylvester-rows": 1e-6,
    "second-order-left": 1e-6,
    "second-order-right": 1e-6,
    "second-order-rows": 1e-6,
    "adjoint-ell": 1e-7,
    "eigenvalue-formula": 1e-9,
    "eigen-left": 1e-6,
    "eigen-right": 1e-6,
    "eigen-intertwining": 1e-6,
    "alpha-constraint": 1e-6,
    "alpha-weight": 1e-6,
    "adjoint-L": 1e-6,
    "second-kind-eigen": 1e-5,
    "hermite-system": 1e-7,
    "hermite-system-detector": 1e-3,
    "altdpi-first": 1e-6,
    "altdpi-second": 1e-6,
    "altdpi-gamma-from-beta": 1e-8,
    "magnus-altdpi": 1e-6,
    "dpi": 1e-6,
    "magnus-dpi": 1e-6,
    "lattice-vs-oracle": 1e-5,
    "lattice-vs-oracle-extended": 1e-8,
    "comparison": 1e-8,
}

ANCHORS = {
    "boundary-decay": "boundary conditions of the weight",
    "pearson": "Pearson-Sylvester equation",
    "pearson-second-order": "second-order weight equations",
    "biorthogonality": "biorthogonality",
    "three-term": "three-term relation",
    "hermite-oracle": "Gaussian recursion coefficients",
    "det": "unimodular fundamental matrix",
    "transfer": "transfer matrix",
    "inverse": "inverse of the fundamental matrix",
    "constant-jump": "constant jump matrix",
    "structure-mirror": "left/right structure matrix relation",
    "structure-closed-form": "closed-form structure matrix",
    "zero-curvature": "zero curvature",
    "second-order-zero-curvature": "second order zero curvature",
    "higher-order-zero-curvature": "higher order transfer matrices",
    "coefficient-relation": "expansion coefficient relations",
    "cd": "Christoffel-Darboux",
    "sylvester": "Sylvester differential system",
    "second-order": "second-order differential equations",
    "adjoint": "adjoint operators",
    "eigen": "eigenvalue problem",
    "alpha": "alpha constraint",
    "second-kind-eigen": "second-kind eigen-equations",
    "hermite-system": "linear Pearson nonlinear system",
    "altdpi": "matrix alt-dPI",
    "magnus-altdpi": "scalar alt-dPI",
    "dpi": "matrix dPI",
    "magnus-dpi": "scalar dPI",
    "lattice-vs-oracle": "dPI lattice against quadrature",
}


@dataclass(frozen=True)
class Record:
    suite: str
    identity: str
    n: int
    residual: float
    tolerance: float
    kind: str = "identity"
    note: str = ""

    @property
    def paper_anchor(self) -> str:
        best = ""
        for key in ANCHORS:
            if self.identity.startswith(key) and len(key) > len(best):
                best = key
        return ANCHORS.get(best, self.identity)

    @property
    def passed(self) -> bool:
        r = self.residual
        if not np.isfinite(r):
            return False
        if self.kind == "detector":
            return r > self.tolerance
        return r < self.tolerance

    @property
    def blocking(self) -> bool:
        return self.kind != "comparison"


def slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower().replace("=", "")).strip("-")


# ---------------------------------------------------------------- context

@dataclass
class Context:
    cfg: ExperimentConfig
    spec: PearsonSpec
    contour: Contour
    weight: object
    rule: object
    data: object
    frames: Frames
    samples: tuple
    cd_pairs: tuple
    decay: object
    n_data: int
    zc_cache: dict = field(default_factory=dict)

    @property
    def extended(self) -> bool:
        return self.cfg.precision == "extended"

    def tol(self, identity):
        """Config override first, then the longest matching default prefix."""
        t = self.cfg.tolerances
        if identity in t:
            return t[identity]
        key = identity
        while key:
            if key in DEFAULT_TOL:
                return DEFAULT_TOL[key]
            key = key.rpartition("-")[0]
        return DEFAULT_TOL["comparison"]


def build_spec(cfg: ExperimentConfig) -> PearsonSpec:
    return PearsonSpec(MatrixPoly(np.stack(cfg.hL)), MatrixPoly(np.stack(cfg.hR)))


def _sample_points(cfg, contour):
    pts = cfg.samples if cfg.samples is not None else DEFAULT_SAMPLES
    return tuple(z for z in pts if contour.distance(z) >= SAMPLE_CLEARANCE)


def _cd_pairs(cfg, contour):
    rng = np.random.default_rng(cfg.seed)
    out = []
    while len(out) < CD_PAIRS:
        r = rng.uniform(0.6, 2.5, 2)
        th = rng.uniform(0, 2 * np.pi, 2)
        z, t = r * np.exp(1j * th)
        if min(contour.distance(z), contour.distance(t)) >= SAMPLE_CLEARANCE and abs(z - t) > 0.3:
            out.append((complex(z), complex(t)))
    return tuple(out)


def build_context(cfg: ExperimentConfig) -> Context:
    q = cfg.quadrature
    pl = build(build_spec(cfg), cfg.n_max + cfg.ell_max + 2, cfg.contour.kind, cfg.contour.T, cfg.precision,
               cfg.Kq, q.panels, q.order, q.normalization, cfg.contour.reflect)
    frames = Frames(pl.data, pl.weight, pl.rule)
    return Context(cfg, pl.spec, pl.contour, pl.weight, pl.rule, pl.data, frames,
                   _sample_points(cfg, pl.contour), _cd_pairs(cfg, pl.contour),
                   decay_check(pl.weight, pl.contour), pl.data.n_top - 1)


# ----------------------------------------------------------------- helpers

def _rec(ctx, suite, identity, n, residual, kind="identity", tol=None, note=""):
    if tol is None:
        tol = ctx.tol(identity)
    return Record(suite, identity, int(n), float(residual), float(tol), kind, note)


def _family_params(ctx):
    c = ctx.cfg.hL
    fam = ctx.cfg.family
    if fam == "hermite":
        return {"AL": c[1], "BL": c[0], "AR": ctx.cfg.hR[1], "BR": ctx.cfg.hR[0]}
    if fam == "altdpi":
        return {"lam": c[0], "mu": c[1], "nu": c[2]}
    if fam == "dpi":
        return {"mu": c[1], "nu": c[3]}
    return {}


def _is_diag(*ms):
    return all(np.allclose(m, np.diag(np.diag(m))) for m in ms)


def _alphas(ctx):
    N = ctx.cfg.N
    aL = ctx.cfg.alphaL if ctx.cfg.alphaL is not None else np.zeros((N, N), complex)
    aR = ctx.cfg.alphaR if ctx.cfg.alphaR is not None else np.zeros((N, N), complex)
    return aL, aR


# ------------------------------------------------------------------ suites

def suite_recurrence(ctx: Context) -> list:
    s = "recurrence"
    out = [_rec(ctx, s, "boundary-decay", 0, ctx.decay.worst)]
    pts = [0.0, 0.7, -1.3] if ctx.contour.kind == "real-line" else [complex(ctx.contour.z(np.array(t))) for t in (0.0, 0.6, -0.9)]
    out.append(_rec(ctx, s, "pearson", 0, max(pearson_residual(ctx.weight, z) for z in pts)))
    out.append(_rec(ctx, s, "pearson-second-order-left", 0,
                    max(second_order_weight_residual(ctx.weight, z) for z in pts)))
    out.append(_rec(ctx, s, "pearson-second-order-right", 0,
                    max(second_order_weight_residual_right(ctx.weight, z) for z in pts)))
    d = ctx.data
    out.append(_rec(ctx, s, "biorthogonality", ctx.cfg.n_max, biorthogonality_residual(d, ctx.cfg.n_max)))
    for n in range(ctx.cfg.n_max + 1):
        out.append(_rec(ctx, s, "three-term-left", n, recurrence_residual(d, n, "L")))
        out.append(_rec(ctx, s, "three-term-right", n, recurrence_residual(d, n, "R")))
    h = ctx.cfg
    gaussian = (h.family == "hermite" and h.N == 1 and np.allclose(h.hL[1], -1) and np.allclose(h.hR[1], -1)
                and np.allclose(h.hL[0], 0) and np.allclose(h.hR[0], 0))
    if gaussian:
        for n in range(ctx.cfg.n_max + 1):
            out.append(_rec(ctx, s, "hermite-oracle-beta", n, norm(to_double(d.beta(n)))))
            out.append(_rec(ctx, s, "hermite-oracle-gamma", n, abs(complex(to_double(d.gamma(n, lattice=True))[0, 0]) - n / 2)))
    return out


def suite_rh(ctx: Context) -> list:
    s = "rh-identities"
    F = ctx.frames
    out = []
    nm = ctx.cfg.n_max
    for n in range(nm + 1):
        out.append(_rec(ctx, s, "det-left", n, max(F.det_residual(n, z, "L") for z in ctx.samples)))
        out.append(_rec(ctx, s, "det-right", n, max(F.det_residual(n, z, "R") for z in ctx.samples)))
        out.append(_rec(ctx, s, "transfer-det", n, max(F.transfer_det_residual(n, z) for z in ctx.samples)))
        out.append(_rec(ctx, s, "transfer-step-left", n,
                        max(F.transfer_step_residual(n, z, "L") for z in ctx.samples)))
        out.append(_rec(ctx, s, "transfer-step-right", n,
                        max(F.transfer_step_residual(n, z, "R") for z in ctx.samples)))
        out.append(_rec(ctx, s, "transfer-similarity", n, F.transfer_similarity_residual(n)))
        out.append(_rec(ctx, s, "inverse-relation", n, max(F.inverse_relation_residual(n, z) for z in ctx.samples)))
        if n >= 1:
            cor = max(max(F.corollary_residuals(n, z).values()) for z in ctx.samples)
            out.append(_rec(ctx, s, "inverse-corollaries", n, cor))
        out.append(_rec(ctx, s, "constant-jump-left", n, max(F.constant_jump_residual(n, t, "L") for t in JUMP_POINTS)))
        out.append(_rec(ctx, s, "constant-jump-right", n, max(F.constant_jump_residual(n, t, "R") for t in JUMP_POINTS)))
        out.append(_rec(ctx, s, "structure-mirror", n, F.structure_mirror_residual(n)))
        out.extend(_closed_forms(ctx, n))
        zc = F.zero_curvature_residuals(n, ctx.cfg.ell_max, ctx.zc_cache)
        for key, val in zc.items():
            out.append(_rec(ctx, s, slug(key), n, val))
        if n >= 1:
            for key, (labelled, same) in F.coefficient_relations(n).items():
                ident = "coefficient-relation-" + slug(key)
                out.append(_rec(ctx, s, ident, n, same))
                if labelled != same:
                    out.append(_rec(ctx, s, ident + "-mixed-labels", n, labelled, kind="comparison"))
    return out


def _closed_forms(ctx, n):
    s = "rh-identities"
    F = ctx.frames
    p = _family_params(ctx)
    fam = ctx.cfg.family
    if fam == "hermite":
        return [_rec(ctx, s, "structure-closed-form-hermite", n,
                     closed_form_residual(F, n, hermite_structure(F, n, p["AL"], p["BL"], p["AR"], p["BR"])))]
    if fam == "altdpi":
        return [_rec(ctx, s, "structure-closed-form-altdpi", n,
                     closed_form_residual(F, n, altdpi_structure(F, n, p["lam"], p["mu"], p["nu"])))]
    if fam == "dpi":
        return [_rec(ctx, s, "structure-closed-form-dpi", n,
                     closed_form_residual(F, n, dpi_structure(F, n, p["mu"], p["nu"], "derived"))),
                _rec(ctx, s, "structure-closed-form-dpi-as-displayed", n,
                     closed_form_residual(F, n, dpi_structure(F, n, p["mu"], p["nu"], "printed")), kind="comparison")]
    return []


def suite_cd(ctx: Context) -> list:
    s = "cd"
    F = ctx.frames
    out = []
    for n in range(ctx.cfg.n_max + 1):
        worst, printed = {}, 0.0
        for z, t in ctx.cd_pairs:
            for key, val in F.cd_residuals(n, z, t, relative=True).items():
                worst[key] = max(worst.get(key, 0.0), val)
            printed = max(printed, F.cd_residuals(n, z, t, printed_qq=True, relative=True)["CD QQ"])
        for key in sorted(worst):
            out.append(_rec(ctx, s, slug(key), n, worst[key]))
        out.append(_rec(ctx, s, "cd-qq-without-boundary-term", n, printed, kind="comparison"))
    return out


def suite_ode(ctx: Context) -> list:
    s = "ode"
    F = ctx.frames
    zs = ctx.samples[:ODE_SAMPLES]
    out = []
    for n in range(ctx.cfg.n_max + 1):
        for side, name in (("L", "sylvester-left"), ("R", "sylvester-right")):
            out.append(_rec(ctx, s, name, n, max(odesys.sylvester_matrix_residual(F, n, z, side) for z in zs)))
        rows = [odesys.split_sylvester_residuals(F, n, z) for z in zs]
        out.append(_rec(ctx, s, "sylvester-rows", n, max(max(r.values()) for r in rows)))
        printed = [odesys.split_sylvester_residuals(F, n, z, printed_q_sign=True) for z in zs]
        out.append(_rec(ctx, s, "sylvester-rows-plus-sign-on-q", n,
                        max(v for r in printed for k, v in r.items() if "Q" in k), kind="comparison"))
        for side, name in (("L", "second-order-left"), ("R", "second-order-right")):
            out.append(_rec(ctx, s, name, n, max(odesys.second_order_matrix_residual(F, n, z, side) for z in zs)))
        rows = [odesys.split_second_order_residuals(F, n, z) for z in zs]
        out.append(_rec(ctx, s, "second-order-rows", n, max(max(r.values()) for r in rows)))
        if n >= 1:
            rows = [odesys.split_second_order_residuals(F, n, z, drop_C=True) for z in zs]
            out.append(_rec(ctx, s, "second-order-rows-without-C", n, max(max(r.values()) for r in rows),
                            kind="comparison"))
    rng = np.random.default_rng(ctx.cfg.seed + 1)
    N = ctx.cfg.N
    worst = 0.0
    for _ in range(3):
        P = MatrixPoly(rng.standard_normal((4, N, N)) + 0j)
        Q = MatrixPoly(rng.standard_normal((4, N, N)) + 0j)
        worst = max(worst, odesys.adjoint_residual(ctx.spec, ctx.data.moments, P, Q))
    out.append(_rec(ctx, s, "adjoint-ell", 3, worst))
    return out


def suite_eigen(ctx: Context) -> list:
    s = "eigen"
    if ctx.cfg.family != "hermite":
        return []
    F = ctx.frames
    aL, aR = _alphas(ctx)
    AL = ctx.cfg.hL[1]
    zs = ctx.samples[:ODE_SAMPLES]
    out = []
    pts = [0.0, 0.7, -1.3]
    out.append(_rec(ctx, s, "alpha-constraint", 0, odesys.alpha_constraint_residual(ctx.weight, aL, aR, pts + list(zs))))
    for key, val in odesys.alpha_weight_residuals(ctx.weight, aL, aR, pts).items():
        out.append(_rec(ctx, s, slug(key), 0, val))
    nm = ctx.cfg.n_max
    for n in range(nm + 1):
        ev = odesys.eigen_extract(F, n, aL, aR)
        out.append(_rec(ctx, s, "eigenvalue-formula", n, norm(ev.lamL - odesys.lambda_hermite(n, AL, aL))))
        out.append(_rec(ctx, s, "eigen-left", n, ev.residual_left))
        out.append(_rec(ctx, s, "eigen-right", n, ev.residual_right))
        out.append(_rec(ctx, s, "eigen-intertwining", n, ev.intertwining))
        cross = max(odesys.cross_adjoint_residual(F, n, m, aL, aR) for m in range(nm + 1))
        out.append(_rec(ctx, s, "adjoint-L", n, cross))
        q = [odesys.second_kind_eigen_residuals(F, n, z, aL, aR) for z in zs]
        out.append(_rec(ctx, s, "second-kind-eigen-left", n, max(r["second kind eigen left"] for r in q)))
        out.append(_rec(ctx, s, "second-kind-eigen-right", n, max(r["second kind eigen right"] for r in q)))
        q = [odesys.second_kind_eigen_residuals(F, n, z, aL, aR, sign=+1) for z in zs]
        out.append(_rec(ctx, s, "second-kind-eigen-opposite-sign", n,
                        max(max(r.values()) for r in q), kind="comparison"))
    return out


def suite_hermite_lattice(ctx: Context) -> list:
    s = "hermite-lattice"
    if ctx.cfg.family != "hermite":
        return []
    p = _family_params(ctx)
    out = []
    for n in range(ctx.cfg.n_max + 1):
        r = painleve.hermite_system_residual(ctx.data, p["AL"], p["BL"], p["AR"], p["BR"], n)
        out.append(_rec(ctx, s, "hermite-system-i", n, r["hermite system (i)"]))
        out.append(_rec(ctx, s, "hermite-system-ii", n, r["hermite system (ii)"]))
        bad = painleve.perturbed(ctx.data, n + 1, 0.01)
        rb = painleve.hermite_system_residual(bad, p["AL"], p["BL"], p["AR"], p["BR"], n)
        out.append(_rec(ctx, s, "hermite-system-detector", n, rb["hermite system (i)"], kind="detector"))
    return out


def _diag_series(data, n_top, getter):
    return [np.diag(np.asarray(to_double(getter(data, n)), dtype=complex)) for n in range(n_top + 1)]


def suite_altdpi(ctx: Context) -> list:
    s = "altdpi"
    if ctx.cfg.family != "altdpi":
        return []
    p = _family_params(ctx)
    d = ctx.data
    out = []
    dt = d._ref().dtype
    mu_x, nu_x = np.asarray(p["mu"], dtype=dt), np.asarray(p["nu"], dtype=dt)
    for n in range(ctx.cfg.n_max + 1):
        r = painleve.altdPI_residual(d, p["lam"], p["mu"], p["nu"], n)
        out.append(_rec(ctx, s, "altdpi-first", n, r["alt-dPI first"]))
        out.append(_rec(ctx, s, "altdpi-second", n, r["alt-dPI second"]))
        rp = painleve.altdPI_residual(d, p["lam"], p["mu"], p["nu"], n, "printed")
        out.append(_rec(ctx, s, "altdpi-second-as-displayed", n, rp["alt-dPI second"], kind="comparison"))
        g = painleve.altdPI_gamma_from_beta(painleve.state_from_data(d, n), mu_x, nu_x)
        ref = d.gamma(n + 1, lattice=True)
        out.append(_rec(ctx, s, "altdpi-gamma-from-beta", n,
                        norm(to_double(g - ref)) / max(1.0, norm(to_double(ref)))))
    lam, mu, nu = (np.asarray(p[k]) for k in ("lam", "mu", "nu"))
    if _is_diag(lam, mu, nu) and np.allclose(np.diag(nu), 1) and np.allclose(mu, 0):
        top = ctx.cfg.n_max + 1
        betas = _diag_series(d, top, lambda dd, k: dd.beta(k))
        gammas = _diag_series(d, top, lambda dd, k: dd.gamma(k, lattice=True))
        for n in range(ctx.cfg.n_max + 1):
            worst = 0.0
            for i in range(d.N):
                b = [x[i] for x in betas]
                g = [x[i] for x in gammas]
                worst = max(worst, *painleve.magnus_altdpi_residuals(b, g, complex(lam[i, i]).real, n))
            out.append(_rec(ctx, s, "magnus-altdpi", n, worst))
    return out


def suite_dpi(ctx: Context) -> list:
    s = "dpi"
    if ctx.cfg.family != "dpi":
        return []
    p = _family_params(ctx)
    d = ctx.data
    out = []
    for n in range(ctx.cfg.n_max + 1):
        out.append(_rec(ctx, s, "dpi", n, painleve.dPI_residual(d, p["mu"], p["nu"], n)))
    mu, nu = np.asarray(p["mu"]), np.asarray(p["nu"])
    if _is_diag(mu, nu) and np.allclose(np.diag(nu), -1):
        gammas = _diag_series(d, ctx.cfg.n_max + 1, lambda dd, k: dd.gamma(k, lattice=True))
        for n in range(1, ctx.cfg.n_max + 1):
            worst = 0.0
            for i in range(d.N):
                g = [x[i] for x in gammas]
                worst = max(worst, painleve.magnus_dpi_residual(g, -complex(mu[i, i]).real / 2, n))
            out.append(_rec(ctx, s, "magnus-dpi", n, worst))
    return out


def suite_lattice(ctx: Context) -> list:
    s = "lattice-vs-oracle"
    if ctx.cfg.family != "dpi":
        return []
    p = _family_params(ctx)
    nu = np.asarray(p["nu"])
    out = []
    ident = "lattice-vs-oracle-extended" if ctx.extended else "lattice-vs-oracle"
    variants = ("derived", "printed") if ctx.cfg.dpi_variant == "derived" else ("printed",)
    for variant in variants:
        if variant == "printed" and not np.allclose(nu, -np.eye(ctx.cfg.N)):
            continue
        cmp = painleve.lattice_vs_oracle(ctx.data, p["mu"], ctx.cfg.n_max, variant,
                                         nu=None if variant == "printed" else p["nu"])
        kind = "identity" if variant == "derived" else "comparison"
        note = ""
        if cmp.divergence_index is not None:
            note = f"diverges at n={cmp.divergence_index}"
        if cmp.events:
            note = (note + "; " if note else "") + ", ".join(f"{e['event']} at n={e['n']}" for e in cmp.events)
        name = f"{s}-{variant}" if variant == "printed" else ident
        for n, dn in enumerate(cmp.diffs):
            out.append(_rec(ctx, s, name, n, dn, kind=kind, tol=ctx.tol(ident), note=note))
        if len(cmp.diffs) < ctx.cfg.n_max + 1:
            out.append(_rec(ctx, s, name, len(cmp.diffs), float("inf"), kind=kind, tol=ctx.tol(ident), note=note))
    return out


SUITE_FUNCS = {
    "recurrence": suite_recurrence,
    "rh-identities": suite_rh,
    "cd": suite_cd,
    "ode": suite_ode,
    "eigen": suite_eigen,
    "hermite-lattice": suite_hermite_lattice,
    "altdpi": suite_altdpi,
    "dpi": suite_dpi,
    "lattice-vs-oracle": suite_lattice,
}


def run_suites(ctx: Context, jobs: int = 1) -> list:
    names = [s for s in SUITES if s in ctx.cfg.suites]
    if jobs > 1 and len(names) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(zip(names, pool.map(lambda n: SUITE_FUNCS[n](ctx), names)))
    else:
        results = {n: SUITE_FUNCS[n](ctx) for n in names}
    out = []
    for n in names:
        out.extend(results[n])
    return out
