"""Exact freeness analysis of line arrangements over quadratic fields."""
from .errors import ArrangementError
from .exactnum import RATIONAL, FieldContext, QuadScalar
from .freeness import FreenessVerdict, decide_free, enumerate_profiles
from .geometry import Arrangement, Triple, char_poly, f_vector, lattice_isomorphic
from .search import candidate_additions, inductive_certificate, prove_stuck

__all__ = [
    "ArrangementError", "RATIONAL", "FieldContext", "QuadScalar", "FreenessVerdict", "decide_free",
    "enumerate_profiles", "Arrangement", "Triple", "char_poly", "f_vector", "lattice_isomorphic",
    "candidate_additions", "inductive_certificate", "prove_stuck",
]
