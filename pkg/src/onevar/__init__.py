"""Proof engine and finite-algebra workbench for one-variable substructural logic."""

from .syntax import parse_fo, parse_modal, render, star, circle
from .proof import (
    CONFIGS, CalculusConfig, CheckError, Node, Sequent, check_derivation,
    parse_sequent, sequent,
)
from .search import Budget, SearchResult, prove
from .interpolation import InterpolationResult, interpolate
from .modalization import check_modal_derivation, eliminate
from .algebra import (
    AlgebraError, FiniteAlgebra, TermEquation, eval_equation, load_catalog,
    parse_equation, validate,
)
from .semantics import Structure, eval_fo, structure

__all__ = [
    "parse_fo", "parse_modal", "render", "star", "circle",
    "CONFIGS", "CalculusConfig", "CheckError", "Node", "Sequent",
    "check_derivation", "parse_sequent", "sequent",
    "Budget", "SearchResult", "prove",
    "InterpolationResult", "interpolate",
    "check_modal_derivation", "eliminate",
    "AlgebraError", "FiniteAlgebra", "TermEquation", "eval_equation",
    "load_catalog", "parse_equation", "validate",
    "Structure", "eval_fo", "structure",
]
