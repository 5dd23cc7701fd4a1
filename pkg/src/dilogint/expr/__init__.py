"""Expression front end: grammar, elaboration into towers, canonical printing."""

from .parser import parse, elaborate, parse_elem
from .printer import format_elem

__all__ = ["parse", "elaborate", "parse_elem", "format_elem"]
