"""Explicit Baker-type lower bounds for linear forms in exponentials.

Modules: ``field`` (exact arithmetic in Q and imaginary quadratic rings),
``invariants`` (g1..g4 and the derived constants), ``nestedlog`` (z(y) with
z log z = y), ``siegel`` (small solutions of homogeneous systems), ``pade``
(Hermite-Pade construction), ``forms`` (rigorous numerical forms), ``bounds``
(theorem, corollaries, comparisons, presets) and ``cli``.
"""

from .field import AlphaPoint, FieldElement, FieldSpec, QuadInt, parse_alpha_list, parse_element, parse_field
from .invariants import AlphaVector, compute_base_constants, compute_g, compute_gamma_H0, compute_theorem_constants

__version__ = "0.1.0"

__all__ = [
    "AlphaPoint",
    "AlphaVector",
    "FieldElement",
    "FieldSpec",
    "QuadInt",
    "compute_base_constants",
    "compute_g",
    "compute_gamma_H0",
    "compute_theorem_constants",
    "parse_alpha_list",
    "parse_element",
    "parse_field",
]
