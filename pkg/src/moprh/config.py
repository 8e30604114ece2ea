"""Experiment configuration: schema, parsing, serialization and builtin presets.

Configs are JSON.  Matrices are lists of rows; an entry is a real number or
an ``[re, im]`` pair.  Serialization always writes ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from importlib import resources

import jsonschema
import numpy as np

FAMILIES = ("hermite", "altdpi", "dpi", "custom")
SUITES = ("recurrence", "rh-identities", "cd", "ode", "eigen", "hermite-lattice", "altdpi", "dpi",
          "lattice-vs-oracle")
LISTED_PRESETS = ("scalar-hermite", "matrix-hermite-2x2", "freud-quartic-scalar", "freud-quartic-2x2-diag",
                  "altdpi-scalar-magnus", "altdpi-2x2-diag")
EXTRA_PRESETS = ("dpi-displayed-variant",)
# older name kept so existing scripts keep working
PRESET_ALIASES = {"dpi-paper-variant": "dpi-displayed-variant"}


class ConfigError(ValueError):
    pass


_entry = {"oneOf": [{"type": "number"},
                    {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _entry}}
_poly = {"type": "array", "minItems": 1, "items": _matrix}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "family", "hL", "hR", "n_max"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "family": {"enum": list(FAMILIES)},
        "hL": _poly,
        "hR": _poly,
        "alpha": {"type": "object", "additionalProperties": False,
                  "properties": {"L": _matrix, "R": _matrix}},
        "contour": {"type": "object", "additionalProperties": False,
                    "properties": {"kind": {"enum": ["real-line", "hyperbola"]},
                                   "T": {"type": ["number", "null"], "exclusiveMinimum": 0},
                                   "reflect": {"type": "boolean"}}},
        "quadrature": {"type": "object", "additionalProperties": False,
                       "properties": {"panels": {"type": "integer", "minimum": 1},
                                      "order": {"type": "integer", "minimum": 2},
                                      "normalization": {"enum": ["paper", "plain"]}}},
        "n_max": {"type": "integer", "minimum": 0, "maximum": 40},
        "ell_max": {"type": "integer", "minimum": 0, "maximum": 6},
        "Kq": {"type": "integer", "minimum": 1, "maximum": 12},
        "precision": {"enum": ["double", "extended"]},
        "suites": {"type": "array", "items": {"enum": list(SUITES)}, "uniqueItems": True},
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}},
        "seed": {"type": "integer", "minimum": 0},
        "samples": {"type": "array", "items": _entry},
        "dpi_variant": {"enum": ["derived", "printed"]},
        "outputs": {"type": "object", "additionalProperties": False,
                    "properties": {"dir": {"type": "string"}}},
    },
}


@dataclass(frozen=True)
class ContourConfig:
    kind: str = "real-line"
    T: float | None = None
    reflect: bool = False


@dataclass(frozen=True)
class QuadratureConfig:
    panels: int = 64
    order: int = 20
    normalization: str = "paper"


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    family: str
    hL: tuple
    hR: tuple
    n_max: int
    description: str = ""
    alphaL: np.ndarray | None = field(default=None, compare=False)
    alphaR: np.ndarray | None = field(default=None, compare=False)
    contour: ContourConfig = ContourConfig()
    quadrature: QuadratureConfig = QuadratureConfig()
    ell_max: int = 3
    Kq: int = 6
    precision: str = "double"
    suites: tuple = SUITES
    tolerances: dict = field(default_factory=dict)
    seed: int = 20240601
    samples: tuple | None = None
    dpi_variant: str = "derived"
    out_dir: str | None = None

    @property
    def N(self) -> int:
        return self.hL[0].shape[0]

    def __eq__(self, other):
        if not isinstance(other, ExperimentConfig):
            return NotImplemented
        return to_dict(self) == to_dict(other)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


# ------------------------------------------------------------ conversions

def _entry_value(e):
    return complex(e[0], e[1]) if isinstance(e, list) else complex(e)


def matrix_from_json(rows) -> np.ndarray:
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ConfigError("matrix rows have different lengths")
    a = np.array([[_entry_value(e) for e in r] for r in rows], dtype=complex)
    if a.shape[0] != a.shape[1]:
        raise ConfigError(f"matrix must be square, got {a.shape}")
    return a


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def complex_to_json(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def from_dict(d: dict) -> ExperimentConfig:
    try:
        jsonschema.validate(d, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"{path or '<root>'}: {exc.message}") from None
    hL = tuple(matrix_from_json(m) for m in d["hL"])
    hR = tuple(matrix_from_json(m) for m in d["hR"])
    N = hL[0].shape[0]
    if any(m.shape != (N, N) for m in hL + hR):
        raise ConfigError("all Pearson coefficients must share one block size")
    alpha = d.get("alpha", {})
    aL = matrix_from_json(alpha["L"]) if "L" in alpha else None
    aR = matrix_from_json(alpha["R"]) if "R" in alpha else None
    for a in (aL, aR):
        if a is not None and a.shape != (N, N):
            raise ConfigError("alpha matrices must match the block size")
    c = d.get("contour", {})
    q = d.get("quadrature", {})
    cfg = ExperimentConfig(
        name=d["name"],
        family=d["family"],
        hL=hL,
        hR=hR,
        n_max=d["n_max"],
        description=d.get("description", ""),
        alphaL=aL,
        alphaR=aR,
        contour=ContourConfig(c.get("kind", "real-line"), c.get("T"), c.get("reflect", False)),
        quadrature=QuadratureConfig(q.get("panels", 64), q.get("order", 20), q.get("normalization", "paper")),
        ell_max=d.get("ell_max", 3),
        Kq=d.get("Kq", 6),
        precision=d.get("precision", "double"),
        suites=tuple(d.get("suites", SUITES)),
        tolerances=dict(sorted(d.get("tolerances", {}).items())),
        seed=d.get("seed", 20240601),
        samples=tuple(_entry_value(e) for e in d["samples"]) if "samples" in d else None,
        dpi_variant=d.get("dpi_variant", "derived"),
        out_dir=d.get("outputs", {}).get("dir"),
    )
    check_family(cfg)
    return cfg


def check_family(cfg: ExperimentConfig):
    dL, dR = len(cfg.hL) - 1, len(cfg.hR) - 1
    zero_R = all(np.allclose(m, 0) for m in cfg.hR)
    if cfg.family == "hermite" and (dL != 1 or dR != 1):
        raise ConfigError("hermite family needs h^L and h^R of degree one")
    if cfg.family == "altdpi" and (dL != 2 or not zero_R):
        raise ConfigError("altdpi family needs h^L of degree two and h^R = 0")
    if cfg.family == "dpi":
        if dL != 3 or not zero_R:
            raise ConfigError("dpi family needs h^L of degree three and h^R = 0")
        if not (np.allclose(cfg.hL[0], 0) and np.allclose(cfg.hL[2], 0)):
            raise ConfigError("dpi family needs h^L = mu z + nu z^3")


def to_dict(cfg: ExperimentConfig) -> dict:
    d = {
        "name": cfg.name,
        "description": cfg.description,
        "family": cfg.family,
        "hL": [matrix_to_json(m) for m in cfg.hL],
        "hR": [matrix_to_json(m) for m in cfg.hR],
        "contour": asdict(cfg.contour),
        "quadrature": asdict(cfg.quadrature),
        "n_max": cfg.n_max,
        "ell_max": cfg.ell_max,
        "Kq": cfg.Kq,
        "precision": cfg.precision,
        "suites": list(cfg.suites),
        "tolerances": dict(sorted(cfg.tolerances.items())),
        "seed": cfg.seed,
        "dpi_variant": cfg.dpi_variant,
    }
    alpha = {}
    if cfg.alphaL is not None:
        alpha["L"] = matrix_to_json(cfg.alphaL)
    if cfg.alphaR is not None:
        alpha["R"] = matrix_to_json(cfg.alphaR)
    if alpha:
        d["alpha"] = alpha
    if cfg.samples is not None:
        d["samples"] = [complex_to_json(z) for z in cfg.samples]
    if cfg.out_dir is not None:
        d["outputs"] = {"dir": cfg.out_dir}
    return d


def dumps(cfg: ExperimentConfig) -> str:
    return json.dumps(to_dict(cfg), indent=2, sort_keys=True)


def loads(text: str) -> ExperimentConfig:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from None
    return from_dict(d)


def load(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------- presets

def preset_names(include_extra=False) -> tuple:
    return LISTED_PRESETS + (EXTRA_PRESETS if include_extra else ())


def preset(name: str) -> ExperimentConfig:
    name = PRESET_ALIASES.get(name, name)
    if name not in LISTED_PRESETS + EXTRA_PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    text = resources.files("moprh").joinpath("presets", f"{name}.json").read_text(encoding="utf-8")
    return loads(text)


def describe_presets(include_extra=False) -> list:
    return [(n, preset(n).description) for n in preset_names(include_extra)]
