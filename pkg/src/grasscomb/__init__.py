"""Exact checks of determinant, path-counting and Schur identities through
Grassmann (Berezin) integrals."""

from .errors import (
    ArgumentError,
    EvaluationError,
    GrasscombError,
    ParseError,
    PreconditionError,
    ShapeError,
    SingularMatrixError,
    TruncationError,
)
from .grassmann import GeneratorOrder, GrassmannElement, berezin_det, berezin_integrate, berezin_minor
from .graphs import DirectedMultigraph, cycle_partition_function, lgv_check
from .linalg import PolyMatrix, det_poly
from .poly import Poly
from .schur import ExtParams, Partition, SkewShape, jacobi_trudi, lattice_path_schur, schur_ssyt
from .transfer import LayeredGraph, theorem2_check

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "EvaluationError", "GrasscombError", "ParseError", "PreconditionError",
    "ShapeError", "SingularMatrixError", "TruncationError",
    "GeneratorOrder", "GrassmannElement", "berezin_det", "berezin_integrate", "berezin_minor",
    "DirectedMultigraph", "cycle_partition_function", "lgv_check",
    "PolyMatrix", "det_poly", "Poly",
    "ExtParams", "Partition", "SkewShape", "jacobi_trudi", "lattice_path_schur", "schur_ssyt",
    "LayeredGraph", "theorem2_check",
]
