"""One-call construction of weight, quadrature rule and recursion data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biorth import RecurrenceData, recurrence
from .contour import Contour, QuadratureRule, build_rule
from .mxcore import MatrixPoly, use_extended
from .weights import PearsonSpec, Weight, default_truncation, moments, weight_eval


@dataclass
class Pipeline:
    spec: PearsonSpec
    contour: Contour
    weight: Weight
    rule: QuadratureRule
    data: RecurrenceData

    def frames(self):
        from .rhframe import Frames

        return Frames(self.data, self.weight, self.rule)


def pearson(hL, hR=None) -> PearsonSpec:
    """Spec from coefficient lists (scalars or matrices, lowest power first)."""
    hL = MatrixPoly.from_list(hL)
    hR = MatrixPoly(np.zeros((1, hL.N, hL.N), complex)) if hR is None else MatrixPoly.from_list(hR)
    return PearsonSpec(hL, hR)


def build(spec: PearsonSpec, n_max: int, kind: str = "real-line", T: float | None = None,
          precision: str = "double", Kq: int = 6, panels: int = 64, order: int = 20,
          normalization: str = "paper", reflect: bool = False) -> Pipeline:
    """Weight and rule in double; moments and recursion data at ``precision``.

    Data are computed up to ``n_max`` (so ``P_{n_max+1}`` and ``C_{n_max}`` exist).
    """
    T = default_truncation(spec, kind, reflect=reflect) if T is None else T
    contour = Contour(kind, T, reflect)
    weight = weight_eval(spec, contour)
    rule = build_rule(contour, panels, order, normalization)
    K = 2 * (n_max + 1) + Kq
    if precision == "extended":
        use_extended()
        m = moments(weight_eval(spec, contour, "extended"),
                    build_rule(contour, panels, order, normalization, precision="extended"), K)
    else:
        m = moments(weight, rule, K)
    return Pipeline(spec, contour, weight, rule, recurrence(m, n_max, Kq=Kq))
