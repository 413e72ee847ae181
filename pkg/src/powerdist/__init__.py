"""Powered distance sums from a point on a sphere to the vertices of regular
polytopes: evaluation, constancy decisions, extremum search and checks."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import (DegenerateSlice, DegenerateSpectrum, DimensionMismatch, InvalidParameter,
                     NoConvergence, NotDualPair, OutOfRange, PowerDistError, SingularEvaluation,
                     UnsupportedFamily)
from .polytopes import PolytopeFamily, VertexSet, distance_spectrum, generate
from .powersum import PowerSumParams, SphereSpec, closed_form_even, evaluate, tangential_gradient

__all__ = [
    "__version__", "PolytopeFamily", "VertexSet", "generate", "distance_spectrum",
    "PowerSumParams", "SphereSpec", "evaluate", "tangential_gradient", "closed_form_even",
    "PowerDistError", "InvalidParameter", "DimensionMismatch", "SingularEvaluation",
    "OutOfRange", "DegenerateSlice", "DegenerateSpectrum", "UnsupportedFamily", "NotDualPair",
    "NoConvergence",
]
