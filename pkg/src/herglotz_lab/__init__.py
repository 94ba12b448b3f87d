"""Numerical toolkit for matrix-valued Herglotz functions.

Evaluation from closed forms or representation data, recovery of the
measure from boundary values, linear-fractional transformations by
J-unitary matrices, spectral classification, and the perturbation and
extension formulas built on them.
"""

from . import boundary, catalog, classify, config, extensions, herglotz_core, lft, measures
from .errors import HerglotzLabError
from .herglotz_core import HerglotzFunction, RepresentationFunction, verify_herglotz
from .kernels import BACKEND
from .measures import MatrixMeasure

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "HerglotzFunction", "HerglotzLabError", "MatrixMeasure", "RepresentationFunction",
    "boundary", "catalog", "classify", "config", "extensions", "herglotz_core", "lft", "measures",
    "verify_herglotz",
]
