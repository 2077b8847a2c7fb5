"""Algebraic hyperbolicity of very general surfaces in five toric threefolds."""

__version__ = "0.1.0"

from .ambient import (
    AmbientThreefold,
    DivisorClass,
    Kind,
    adjoint_canonical,
    complete_intersection_genus,
    curve_degree,
    load_ambient,
    make_ambient,
    triple,
)
from .hyperbolicity import (
    BoundKind,
    Status,
    Verdict,
    WitnessKind,
    best_epsilon,
    classify,
    cor_main_bound,
    special_curve_genus,
    survey,
)
from .sections import is_section_dominating, monomial_basis

__all__ = [
    "AmbientThreefold",
    "BoundKind",
    "DivisorClass",
    "Kind",
    "Status",
    "Verdict",
    "WitnessKind",
    "adjoint_canonical",
    "best_epsilon",
    "classify",
    "complete_intersection_genus",
    "cor_main_bound",
    "curve_degree",
    "is_section_dominating",
    "load_ambient",
    "make_ambient",
    "monomial_basis",
    "special_curve_genus",
    "survey",
    "triple",
]
