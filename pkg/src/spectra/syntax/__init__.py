"""Lexing, parsing, and printing of Spectra specifications."""

from .lexer import Token, tokenize
from .nodes import (
    Assumption, Binary, BoolType, Const, Define, Element, EnumType, Expr,
    Guarantee, Instance, IntLit, IntRangeType, Monitor, NameRef, Pattern,
    Predicate, SpecAst, TempConstraint, TypeDef, TypeExpr, TypeRef, Unary,
    VarDecl, constraints_of, walk_exprs,
)
from .parser import parse, parse_expression
from .printer import print_constraint, print_expr, print_spec, print_type

__all__ = [
    "Token", "tokenize",
    "Assumption", "Binary", "BoolType", "Const", "Define", "Element",
    "EnumType", "Expr", "Guarantee", "Instance", "IntLit", "IntRangeType",
    "Monitor", "NameRef", "Pattern", "Predicate", "SpecAst", "TempConstraint",
    "TypeDef", "TypeExpr", "TypeRef", "Unary", "VarDecl",
    "constraints_of", "walk_exprs",
    "parse", "parse_expression",
    "print_constraint", "print_expr", "print_spec", "print_type",
]
