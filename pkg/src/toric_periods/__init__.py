"""Toric periods of supercuspidal representations of GL2 and its quaternion inner form."""
from .padic import Context, PadicNumber, hilbert_symbol, pexp, plog, teichmuller
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra, QuadElem
from .characters import MultCharSpec, Phase, char_eval, conductor_of
from .quaternion import DIVISION, MATRIX, QuatAlgebra, QuatElem, TorusEmbedding
from .cuspidal import CuspidalDatum, build_datum, matrix_coefficient
from .periods import (PeriodProblem, align_torus, conductor_pi, conductor_rs, existence_routes,
                      geometric_existence, matching_character, period_integral,
                      predicted_integral, tunnell_epsilon, whole_torus_case)
from .appendix import appendix_test_vector_search, whittaker_check
from .orbital import TestFunction, archimedean_orbital, orbital_xi, orbital_zero
from .instances import case_datum, reference_problem

__all__ = [
    "Context", "PadicNumber", "hilbert_symbol", "pexp", "plog", "teichmuller",
    "INERT", "RAMIFIED", "SPLIT", "QuadAlgebra", "QuadElem",
    "MultCharSpec", "Phase", "char_eval", "conductor_of",
    "DIVISION", "MATRIX", "QuatAlgebra", "QuatElem", "TorusEmbedding",
    "CuspidalDatum", "build_datum", "matrix_coefficient",
    "PeriodProblem", "align_torus", "conductor_pi", "conductor_rs", "existence_routes",
    "geometric_existence", "matching_character", "period_integral", "predicted_integral",
    "tunnell_epsilon", "whole_torus_case",
    "appendix_test_vector_search", "whittaker_check",
    "TestFunction", "archimedean_orbital", "orbital_xi", "orbital_zero",
    "case_datum", "reference_problem",
]
