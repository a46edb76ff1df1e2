"""Syntax tree for Spectra specifications.

Nodes compare structurally; source spans are carried along but excluded
from equality so that reparsing printed output yields equal trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..diagnostics import GENERATED, Span

# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class BoolType:
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class EnumType:
    values: Tuple[str, ...]
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class IntRangeType:
    lower: int
    upper: int
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class TypeRef:
    name: str
    span: Span = field(default=GENERATED, compare=False)


TypeExpr = Union[BoolType, EnumType, IntRangeType, TypeRef]


# ---------------------------------------------------------------------------
# expressions

UNARY_OPS = ("not", "next", "neg", "prev", "historically", "once")
BINARY_OPS = (
    "and", "or", "implies", "iff",
    "eq", "lt", "gt", "le", "ge",
    "add", "sub", "mul", "div", "mod",
    "since",
)


@dataclass(frozen=True)
class Const:
    value: bool
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class NameRef:
    name: str
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Instance:
    """Predicate or pattern instantiation; which one is resolved later."""

    name: str
    args: Tuple["Expr", ...]
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = field(default=GENERATED, compare=False)


Expr = Union[Const, IntLit, NameRef, Instance, Unary, Binary]


# ---------------------------------------------------------------------------
# elements

CONSTRAINT_KINDS = ("ini", "trans", "alw", "alwEv")


@dataclass(frozen=True)
class TempConstraint:
    kind: str  # one of CONSTRAINT_KINDS; "alw" only exists before lowering
    expr: Expr
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class VarDecl:
    kind: str  # "env" | "sys"
    ty: TypeExpr
    name: str
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Assumption:
    name: Optional[str]
    constraint: TempConstraint
    span: Span = field(default=GENERATED, compare=False)
    origin: Optional[object] = field(default=None, compare=False)


@dataclass(frozen=True)
class Guarantee:
    name: Optional[str]
    constraint: TempConstraint
    span: Span = field(default=GENERATED, compare=False)
    origin: Optional[object] = field(default=None, compare=False)


@dataclass(frozen=True)
class Define:
    name: str
    expr: Expr
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class TypeDef:
    name: str
    ty: TypeExpr
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Predicate:
    name: str
    params: Tuple[Tuple[TypeExpr, str], ...]
    body: Expr
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Monitor:
    ty: TypeExpr
    name: str
    constraints: Tuple[TempConstraint, ...]
    span: Span = field(default=GENERATED, compare=False)


@dataclass(frozen=True)
class Pattern:
    name: str
    params: Tuple[str, ...]
    vars: Tuple[Tuple[TypeExpr, str], ...]
    constraints: Tuple[TempConstraint, ...]
    span: Span = field(default=GENERATED, compare=False)


Element = Union[
    VarDecl, Assumption, Guarantee, Define, TypeDef, Predicate, Monitor, Pattern
]


@dataclass(frozen=True)
class SpecAst:
    imports: Tuple[str, ...]
    name: str
    elements: Tuple[Element, ...]
    span: Span = field(default=GENERATED, compare=False)


def walk_exprs(e: Expr):
    """Yield every node of an expression tree, preorder."""
    yield e
    if isinstance(e, Unary):
        yield from walk_exprs(e.operand)
    elif isinstance(e, Binary):
        yield from walk_exprs(e.left)
        yield from walk_exprs(e.right)
    elif isinstance(e, Instance):
        for a in e.args:
            yield from walk_exprs(a)


def constraints_of(elem: Element) -> Tuple[TempConstraint, ...]:
    if isinstance(elem, (Assumption, Guarantee)):
        return (elem.constraint,)
    if isinstance(elem, (Monitor, Pattern)):
        return elem.constraints
    return ()
