"""Generalized confluent hypergeometric solutions of the confluent Heun equation."""

from .che import CaseKind, CheParams, classify, shift_delta_exponent, swap_singularities, validate_params
from .frobenius import frobenius_coefficients, frobenius_eval, ode_residual
from .ghf import GhfSolution, construct_solutions, ghf_coefficients, ghf_eval
from .pisystem import accessory_polynomial, accessory_spectrum, consistency_relations, solve_auxiliary_parameters
from .poly import Poly, eval_poly, interpolate_poly, poly_from_roots, roots_of_poly

__all__ = [
    "CaseKind", "CheParams", "classify", "shift_delta_exponent", "swap_singularities", "validate_params",
    "frobenius_coefficients", "frobenius_eval", "ode_residual",
    "GhfSolution", "construct_solutions", "ghf_coefficients", "ghf_eval",
    "accessory_polynomial", "accessory_spectrum", "consistency_relations", "solve_auxiliary_parameters",
    "Poly", "eval_poly", "interpolate_poly", "poly_from_roots", "roots_of_poly",
]
