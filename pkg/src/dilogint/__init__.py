"""Exact integration in dilogarithmic-elementary differential towers."""

from .errors import (DecompositionFailed, DomainError, IdentityViolation, InferenceFailed,
                     KernelError, ParseError, StructuralError, TowerError, UnsplittableError)
from .tower import Kind, Monomial, Tower, TowerElem
from .expr import elaborate, format_elem, parse, parse_elem

__all__ = [
    "DecompositionFailed", "DomainError", "IdentityViolation", "InferenceFailed", "KernelError",
    "ParseError", "StructuralError", "TowerError", "UnsplittableError",
    "Kind", "Monomial", "Tower", "TowerElem",
    "elaborate", "format_elem", "parse", "parse_elem",
]
