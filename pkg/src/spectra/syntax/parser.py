"""Recursive-descent parser for Spectra.

Operator precedence, strongest to weakest:
unary (!, -, next, Y, H, O) > * / mod > + - > = < > <= >= S > & > | > <-> > ->
with all binary operators associating to the left. Syntax errors are
collected with recovery at element boundaries so several can be reported
in one pass.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, DiagnosticsError, Span
from . import nodes as n
from .lexer import Token, tokenize

# binary token kind -> (ast op, precedence); higher binds stronger
BINARY = {
    "IMPLIES": ("implies", 1),
    "IFF": ("iff", 2),
    "OR": ("or", 3),
    "AND": ("and", 4),
    "EQ": ("eq", 5),
    "LT": ("lt", 5),
    "GT": ("gt", 5),
    "LE": ("le", 5),
    "GE": ("ge", 5),
    "SINCE": ("since", 5),
    "PLUS": ("add", 6),
    "MINUS": ("sub", 6),
    "STAR": ("mul", 7),
    "SLASH": ("div", 7),
    "MOD": ("mod", 7),
}

UNARY = {
    "NOT": "not",
    "MINUS": "neg",
    "PREV": "prev",
    "HIST": "historically",
    "ONCE": "once",
}

CONSTRAINT_KW = {"INI": "ini", "TRANS": "trans", "ALW": "alw", "ALWEV": "alwEv"}

# single-letter operator keywords double as plain names in declaration
# positions (e.g. a specification may be called S)
NAMELIKE = {"ID", "PREV", "HIST", "ONCE", "SINCE"}

# element-boundary keywords used for error recovery
SYNC = {"ENV", "SYS", "ASM", "GAR", "DEFINE", "TYPE", "PREDICATE",
        "MONITOR", "PATTERN", "IMPORT", "SPEC", "EOF"}


class _ParseFailure(Exception):
    pass


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.toks = tokens + [Token("EOF", "", Span(filename, 0, 0))]
        if tokens:
            end = tokens[-1].span.end
            self.toks[-1] = Token("EOF", "", Span(filename, end, end))
        self.pos = 0
        self.diags: list[Diagnostic] = []
        self.filename = filename

    # -- token helpers ------------------------------------------------------

    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *kinds) -> bool:
        return self.peek().kind in kinds

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind == kind:
            return self.advance()
        expected = what or kind.lower()
        found = repr(t.text) if t.text else "end of input"
        self.error(f"expected {expected}, found {found}", t.span)
        raise _ParseFailure()

    def expect_name(self, what: str) -> Token:
        t = self.peek()
        if t.kind in NAMELIKE:
            return self.advance()
        found = repr(t.text) if t.text else "end of input"
        self.error(f"expected {what}, found {found}", t.span)
        raise _ParseFailure()

    def error(self, message: str, span: Span) -> None:
        self.diags.append(Diagnostic("error", message, span))

    def sync_to_element(self) -> None:
        while not self.at(*SYNC):
            if self.at("SEMI"):
                self.advance()
                return
            self.advance()

    # -- grammar ------------------------------------------------------------

    def parse_spec(self) -> n.SpecAst | None:
        start = self.peek().span
        imports = []
        while self.at("IMPORT"):
            self.advance()
            try:
                path = self.expect("STRING", "quoted file name")
                imports.append(path.text)
                self.expect("SEMI", "';'")
            except _ParseFailure:
                self.sync_to_element()
        try:
            self.expect("SPEC", "'spec'")
            name = self.expect_name("specification name").text
        except _ParseFailure:
            self.sync_to_element()
            name = "<error>"
        elements = []
        while not self.at("EOF"):
            try:
                elements.append(self.parse_element())
            except _ParseFailure:
                self.sync_to_element()
        if not elements and not self.diags:
            self.error("specification must contain at least one element",
                       self.peek().span)
        if self.diags:
            return None
        return n.SpecAst(tuple(imports), name, tuple(elements),
                         start.join(self.peek().span))

    def parse_element(self) -> n.Element:
        t = self.peek()
        if t.kind in ("ENV", "SYS"):
            return self.parse_vardecl()
        if t.kind in ("ASM", "GAR"):
            return self.parse_asm_gar()
        if t.kind == "DEFINE":
            return self.parse_define()
        if t.kind == "TYPE":
            return self.parse_typedef()
        if t.kind == "PREDICATE":
            return self.parse_predicate()
        if t.kind == "MONITOR":
            return self.parse_monitor()
        if t.kind == "PATTERN":
            return self.parse_pattern()
        found = repr(t.text) if t.text else "end of input"
        self.error("expected a specification element "
                   f"(variable, asm, gar, define, type, predicate, monitor, "
                   f"pattern), found {found}", t.span)
        raise _ParseFailure()

    def parse_vardecl(self) -> n.VarDecl:
        t = self.advance()
        kind = "env" if t.kind == "ENV" else "sys"
        ty = self.parse_type()
        name = self.expect_name("variable name")
        semi = self.expect("SEMI", "';'")
        return n.VarDecl(kind, ty, name.text, t.span.join(semi.span))

    def parse_type(self) -> n.TypeExpr:
        t = self.peek()
        if t.kind == "BOOLEAN":
            self.advance()
            return n.BoolType(t.span)
        if t.kind == "INTTYPE":
            self.advance()
            self.expect("LPAR", "'('")
            lo = self.expect("INT", "lower bound")
            self.expect("DOTDOT", "'..'")
            hi = self.expect("INT", "upper bound")
            rp = self.expect("RPAR", "')'")
            return n.IntRangeType(int(lo.text), int(hi.text), t.span.join(rp.span))
        if t.kind == "LBRACE":
            self.advance()
            values = [self.expect_name("enumeration value").text]
            while self.at("COMMA"):
                self.advance()
                values.append(self.expect_name("enumeration value").text)
            rb = self.expect("RBRACE", "'}'")
            return n.EnumType(tuple(values), t.span.join(rb.span))
        if t.kind == "ID":
            self.advance()
            return n.TypeRef(t.text, t.span)
        found = repr(t.text) if t.text else "end of input"
        self.error(f"expected a type (boolean, Int(..), enumeration, or type "
                   f"name), found {found}", t.span)
        raise _ParseFailure()

    def parse_asm_gar(self) -> n.Element:
        t = self.advance()
        name = None
        if self.peek().kind in NAMELIKE and self.peek(1).kind == "COLON":
            name = self.advance().text
            self.advance()
        constraint = self.parse_constraint()
        semi = self.expect("SEMI", "';'")
        span = t.span.join(semi.span)
        if t.kind == "ASM":
            return n.Assumption(name, constraint, span)
        return n.Guarantee(name, constraint, span)

    def parse_constraint(self) -> n.TempConstraint:
        t = self.peek()
        kind = CONSTRAINT_KW.get(t.kind)
        if kind is None:
            found = repr(t.text) if t.text else "end of input"
            self.error(f"expected a temporal constraint (ini, trans, alw, "
                       f"alwEv), found {found}", t.span)
            raise _ParseFailure()
        self.advance()
        expr = self.parse_expr()
        return n.TempConstraint(kind, expr, t.span.join(expr.span))

    def parse_define(self) -> n.Define:
        t = self.advance()
        name = self.expect_name("define name")
        self.expect("ASSIGN", "':='")
        expr = self.parse_expr()
        semi = self.expect("SEMI", "';'")
        return n.Define(name.text, expr, t.span.join(semi.span))

    def parse_typedef(self) -> n.TypeDef:
        t = self.advance()
        name = self.expect_name("type name")
        self.expect("EQ", "'='")
        ty = self.parse_type()
        semi = self.expect("SEMI", "';'")
        return n.TypeDef(name.text, ty, t.span.join(semi.span))

    def parse_predicate(self) -> n.Predicate:
        t = self.advance()
        name = self.expect_name("predicate name")
        self.expect("LPAR", "'('")
        params = [self.parse_typed_param()]
        while self.at("COMMA"):
            self.advance()
            params.append(self.parse_typed_param())
        self.expect("RPAR", "')'")
        self.expect("LBRACE", "'{'")
        body = self.parse_expr()
        rb = self.expect("RBRACE", "'}'")
        return n.Predicate(name.text, tuple(params), body, t.span.join(rb.span))

    def parse_typed_param(self) -> tuple[n.TypeExpr, str]:
        ty = self.parse_type()
        name = self.expect_name("parameter name")
        return (ty, name.text)

    def parse_monitor(self) -> n.Monitor:
        t = self.advance()
        ty = self.parse_type()
        name = self.expect_name("monitor name")
        self.expect("LBRACE", "'{'")
        cons = []
        while not self.at("RBRACE", "EOF"):
            cons.append(self.parse_constraint())
            self.expect("SEMI", "';'")
        rb = self.expect("RBRACE", "'}'")
        if not cons:
            self.error("monitor must contain at least one constraint", t.span)
            raise _ParseFailure()
        return n.Monitor(ty, name.text, tuple(cons), t.span.join(rb.span))

    def parse_pattern(self) -> n.Pattern:
        t = self.advance()
        name = self.expect_name("pattern name")
        self.expect("LPAR", "'('")
        params = [self.expect_name("parameter name").text]
        while self.at("COMMA"):
            self.advance()
            params.append(self.expect_name("parameter name").text)
        self.expect("RPAR", "')'")
        self.expect("LBRACE", "'{'")
        pvars = []
        while self.at("VAR"):
            self.advance()
            ty = self.parse_type()
            vname = self.expect_name("variable name")
            self.expect("SEMI", "';'")
            pvars.append((ty, vname.text))
        cons = []
        while not self.at("RBRACE", "EOF"):
            cons.append(self.parse_constraint())
            self.expect("SEMI", "';'")
        rb = self.expect("RBRACE", "'}'")
        if not cons:
            self.error("pattern must contain at least one constraint", t.span)
            raise _ParseFailure()
        return n.Pattern(name.text, tuple(params), tuple(pvars), tuple(cons),
                         t.span.join(rb.span))

    # -- expressions --------------------------------------------------------

    def parse_expr(self, min_prec: int = 1) -> n.Expr:
        left = self.parse_unary()
        while True:
            t = self.peek()
            info = BINARY.get(t.kind)
            if info is None or info[1] < min_prec:
                return left
            op, prec = info
            self.advance()
            right = self.parse_expr(prec + 1)
            left = n.Binary(op, left, right, left.span.join(right.span))

    def parse_unary(self) -> n.Expr:
        t = self.peek()
        if t.kind == "NEXT":
            self.advance()
            operand = self.parse_primary()
            return n.Unary("next", operand, t.span.join(operand.span))
        op = UNARY.get(t.kind)
        if op is not None:
            self.advance()
            operand = self.parse_unary()
            return n.Unary(op, operand, t.span.join(operand.span))
        return self.parse_primary()

    def parse_primary(self) -> n.Expr:
        t = self.peek()
        if t.kind == "TRUE":
            self.advance()
            return n.Const(True, t.span)
        if t.kind == "FALSE":
            self.advance()
            return n.Const(False, t.span)
        if t.kind == "INT":
            self.advance()
            return n.IntLit(int(t.text), t.span)
        if t.kind == "LPAR":
            self.advance()
            e = self.parse_expr()
            rp = self.expect("RPAR", "')'")
            if isinstance(e, (n.Const, n.IntLit, n.NameRef, n.Instance,
                              n.Unary, n.Binary)):
                object.__setattr__(e, "span", t.span.join(rp.span))
            return e
        if t.kind in ("ID", "SINCE"):
            # a leading S cannot start a since-expression, read it as a name
            self.advance()
            if self.at("LPAR"):
                self.advance()
                args = [self.parse_expr()]
                while self.at("COMMA"):
                    self.advance()
                    args.append(self.parse_expr())
                rp = self.expect("RPAR", "')'")
                return n.Instance(t.text, tuple(args), t.span.join(rp.span))
            return n.NameRef(t.text, t.span)
        found = repr(t.text) if t.text else "end of input"
        self.error(f"expected an expression, found {found}", t.span)
        raise _ParseFailure()


def parse(text: str, filename: str = "<string>") -> n.SpecAst:
    """Parse a full specification, raising DiagnosticsError on failure."""
    tokens = tokenize(text, filename)
    p = _Parser(tokens, filename)
    ast = p.parse_spec()
    if p.diags:
        raise DiagnosticsError(p.diags)
    assert ast is not None
    return ast


def parse_expression(text: str, filename: str = "<expr>") -> n.Expr:
    """Parse a standalone expression (test and tooling helper)."""
    tokens = tokenize(text, filename)
    p = _Parser(tokens, filename)
    try:
        e = p.parse_expr()
    except _ParseFailure:
        raise DiagnosticsError(p.diags)
    if p.peek().kind != "EOF":
        p.error(f"unexpected trailing input {p.peek().text!r}", p.peek().span)
    if p.diags:
        raise DiagnosticsError(p.diags)
    return e
