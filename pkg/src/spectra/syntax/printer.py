"""Pretty-printer emitting short keywords and minimal parentheses.

Reparsing printed output yields a structurally identical tree.
"""

from __future__ import annotations

from . import nodes as n

_BIN_TOKEN = {
    "implies": "->", "iff": "<->", "or": "|", "and": "&",
    "eq": "=", "lt": "<", "gt": ">", "le": "<=", "ge": ">=", "since": "S",
    "add": "+", "sub": "-", "mul": "*", "div": "/", "mod": "mod",
}

_BIN_PREC = {
    "implies": 1, "iff": 2, "or": 3, "and": 4,
    "eq": 5, "lt": 5, "gt": 5, "le": 5, "ge": 5, "since": 5,
    "add": 6, "sub": 6, "mul": 7, "div": 7, "mod": 7,
}

_UNARY_PREC = 8

# keyword-like unaries always print with parentheses around the operand
_UNARY_TOKEN = {"not": "!", "neg": "-", "next": "next",
                "prev": "Y", "historically": "H", "once": "O"}


def print_expr(e: n.Expr) -> str:
    return _expr(e, 0)


def _expr(e: n.Expr, parent_prec: int, right_of: str | None = None) -> str:
    if isinstance(e, n.Const):
        return "true" if e.value else "false"
    if isinstance(e, n.IntLit):
        return str(e.value)
    if isinstance(e, n.NameRef):
        return e.name
    if isinstance(e, n.Instance):
        return f"{e.name}({', '.join(_expr(a, 0) for a in e.args)})"
    if isinstance(e, n.Unary):
        tok = _UNARY_TOKEN[e.op]
        if e.op in ("next", "prev", "historically", "once"):
            return f"{tok}({_expr(e.operand, 0)})"
        return tok + _expr(e.operand, _UNARY_PREC)
    assert isinstance(e, n.Binary)
    prec = _BIN_PREC[e.op]
    left = _expr(e.left, prec)
    # left-associative: right child needs parens at equal precedence
    right = _expr(e.right, prec + 1)
    s = f"{left} {_BIN_TOKEN[e.op]} {right}"
    if prec < parent_prec:
        return f"({s})"
    return s


def print_type(ty: n.TypeExpr) -> str:
    if isinstance(ty, n.BoolType):
        return "boolean"
    if isinstance(ty, n.EnumType):
        return "{" + ", ".join(ty.values) + "}"
    if isinstance(ty, n.IntRangeType):
        return f"Int({ty.lower}..{ty.upper})"
    assert isinstance(ty, n.TypeRef)
    return ty.name


def print_constraint(c: n.TempConstraint) -> str:
    return f"{c.kind} {print_expr(c.expr)}"


def _element(elem: n.Element) -> str:
    if isinstance(elem, n.VarDecl):
        return f"{elem.kind} {print_type(elem.ty)} {elem.name};"
    if isinstance(elem, n.Assumption):
        label = f"{elem.name}: " if elem.name else ""
        return f"asm {label}{print_constraint(elem.constraint)};"
    if isinstance(elem, n.Guarantee):
        label = f"{elem.name}: " if elem.name else ""
        return f"gar {label}{print_constraint(elem.constraint)};"
    if isinstance(elem, n.Define):
        return f"define {elem.name} := {print_expr(elem.expr)};"
    if isinstance(elem, n.TypeDef):
        return f"type {elem.name} = {print_type(elem.ty)};"
    if isinstance(elem, n.Predicate):
        params = ", ".join(f"{print_type(t)} {p}" for t, p in elem.params)
        return (f"predicate {elem.name}({params}) {{\n"
                f"  {print_expr(elem.body)}\n}}")
    if isinstance(elem, n.Monitor):
        body = "\n".join(f"  {print_constraint(c)};" for c in elem.constraints)
        return f"monitor {print_type(elem.ty)} {elem.name} {{\n{body}\n}}"
    assert isinstance(elem, n.Pattern)
    params = ", ".join(elem.params)
    lines = [f"pattern {elem.name}({params}) {{"]
    for ty, v in elem.vars:
        lines.append(f"  var {print_type(ty)} {v};")
    for c in elem.constraints:
        lines.append(f"  {print_constraint(c)};")
    lines.append("}")
    return "\n".join(lines)


def print_spec(ast: n.SpecAst) -> str:
    """Render a specification as parseable Spectra source."""
    lines = [f'import "{p}";' for p in ast.imports]
    lines.append(f"spec {ast.name}")
    lines.extend(_element(e) for e in ast.elements)
    return "\n".join(lines) + "\n"
