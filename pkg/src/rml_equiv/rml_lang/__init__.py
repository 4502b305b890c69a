"""Front end for finitary RML: syntax, types, checking, classification."""
from .classify import FragmentClass, classify
from .parser import RmlSyntaxError, parse_context, parse_term, parse_type
from .syntax import Term
from .typecheck import RmlTypeError, typecheck
from .types import INT, INTREF, UNIT, Arrow, RmlType, TypeSequent, arity, arrows, order

__all__ = [
    "FragmentClass", "classify", "RmlSyntaxError", "parse_context", "parse_term",
    "parse_type", "Term", "RmlTypeError", "typecheck", "INT", "INTREF", "UNIT",
    "Arrow", "RmlType", "TypeSequent", "arity", "arrows", "order",
]
