"""Matrix biorthogonal polynomials for Pearson-Sylvester weights and their Riemann-Hilbert identities."""

from .mxcore import MatrixPoly, MoprhError, use_extended
from .contour import Contour, build_rule
from .weights import PearsonSpec, Weight, weight_eval, moments
from .biorth import RecurrenceData, recurrence
from .secondkind import SecondKind
from .rhframe import Frames

__all__ = [
    "MatrixPoly", "MoprhError", "use_extended", "Contour", "build_rule", "PearsonSpec", "Weight",
    "weight_eval", "moments", "RecurrenceData", "recurrence", "SecondKind", "Frames",
]
__version__ = "0.1.0"
