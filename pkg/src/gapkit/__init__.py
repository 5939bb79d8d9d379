"""Finite-gap spectral sets: abelian differentials, frequencies, divisors, comb and adic models."""

__version__ = "0.1.0"

from .abel_map import Character, abel
from .abelian import FrequencySet, NormalizedDifferentials, frequencies, solve_normalized_polys
from .curve import GapSet, GapSetError, eval_sqrtT, eval_T
from .divisor import Divisor, weyl_pair
from .frequency_map import assemble_jacobian, invert_frequencies
from .potential import green_value, harmonic_measure
from .quadrature import DEFAULT_TOL, SingularIntegrand, quad_singular

__all__ = [
    "Character",
    "DEFAULT_TOL",
    "Divisor",
    "FrequencySet",
    "GapSet",
    "GapSetError",
    "NormalizedDifferentials",
    "SingularIntegrand",
    "abel",
    "assemble_jacobian",
    "eval_T",
    "eval_sqrtT",
    "frequencies",
    "green_value",
    "harmonic_measure",
    "invert_frequencies",
    "quad_singular",
    "solve_normalized_polys",
    "weyl_pair",
]
