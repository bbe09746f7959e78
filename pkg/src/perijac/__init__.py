"""Regularity tests for arithmetic rings via p-derivations and mixed Jacobians."""

from .delta import FrobeniusLift, PerivationMap, cp, delta_int, delta_poly
from .exprparser import parse, render
from .groebner import GroebnerBasis, buchberger
from .mixedjac import (
    Presentation,
    classical_jacobian,
    mixed_jacobian,
    regular_at_point,
    singular_locus_char_zero,
    singular_locus_mod_p,
)
from .numeric import GF, QQ, ZZ, Zmod
from .perivmod import fitting_ideal, perivation_module, regularity_via_theorem_b, truncate
from .polynomial import Poly

__version__ = "0.1.0"

__all__ = [
    "FrobeniusLift",
    "GF",
    "GroebnerBasis",
    "PerivationMap",
    "Poly",
    "Presentation",
    "QQ",
    "ZZ",
    "Zmod",
    "buchberger",
    "classical_jacobian",
    "cp",
    "delta_int",
    "delta_poly",
    "fitting_ideal",
    "mixed_jacobian",
    "parse",
    "perivation_module",
    "regular_at_point",
    "regularity_via_theorem_b",
    "render",
    "singular_locus_char_zero",
    "singular_locus_mod_p",
    "truncate",
]
