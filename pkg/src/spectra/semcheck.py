"""Name resolution, type checking, and well-formedness rules.

Every rule violation is reported as a Diagnostic with the span of the
offending construct; check() raises DiagnosticsError if any error was
found and otherwise returns a CheckedSpec.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .diagnostics import Diagnostic, DiagnosticsError, Span
from .syntax import nodes as n
from .syntax.parser import parse as sx_parse

# semantic types are small tuples: ('bool',) | ('enum', values) | ('int', lo, hi)
BOOL = ("bool",)
WILDCARD = ("any",)  # pattern parameters before instantiation


def type_name(ty) -> str:
    if ty == BOOL:
        return "boolean"
    if ty == WILDCARD:
        return "parameter"
    if ty[0] == "enum":
        return "{" + ", ".join(ty[1]) + "}"
    return f"Int({ty[1]}..{ty[2]})"


@dataclass(frozen=True)
class Facts:
    """Transitive properties of an expression, closed over defines."""

    has_next: bool = False
    refs_sys: bool = False  # system variables, monitors
    refs_env: bool = False
    has_past: bool = False

    def __or__(self, other: "Facts") -> "Facts":
        return Facts(self.has_next or other.has_next,
                     self.refs_sys or other.refs_sys,
                     self.refs_env or other.refs_env,
                     self.has_past or other.has_past)


NO_FACTS = Facts()


@dataclass
class Symbol:
    name: str
    kind: str  # envVar sysVar define typeDef enumValue predicate pattern
    #            monitor assumption guarantee
    ty: tuple | None
    span: Span
    node: object = None
    enum_index: int = -1  # for enumValue: index within its enum


class SymbolTable:
    def __init__(self):
        self.globals: dict[str, Symbol] = {}

    def lookup(self, name: str) -> Symbol | None:
        return self.globals.get(name)

    def __contains__(self, name):
        return name in self.globals

    def of_kind(self, *kinds):
        return [s for s in self.globals.values() if s.kind in kinds]


@dataclass
class CheckedSpec:
    ast: n.SpecAst
    symbols: SymbolTable
    types: dict[int, tuple]  # id(expr node) -> semantic type
    warnings: list[Diagnostic] = field(default_factory=list)

    def type_of(self, node) -> tuple:
        return self.types[id(node)]


@dataclass
class _Ctx:
    polarity: str | None = None  # 'asm' | 'gar' | None (define/predicate body)
    kind: str | None = None  # constraint kind, None in define/predicate body
    under_next: bool = False
    locals: dict = field(default_factory=dict)  # name -> (kind, SemType)
    pattern: n.Pattern | None = None  # inside a pattern body
    types_only: bool = False  # trial instantiation: suppress structural rules


class Checker:
    def __init__(self, ast: n.SpecAst):
        self.ast = ast
        self.diags: list[Diagnostic] = []
        self.warnings: list[Diagnostic] = []
        self.types: dict[int, tuple] = {}
        self.symbols = SymbolTable()
        self.define_type: dict[str, tuple] = {}
        self.define_facts: dict[str, Facts] = {}
        self.pred_facts_stack: list[str] = []
        self._typedef_stack: list[str] = []
        self._define_stack: list[str] = []

    # -- entry --------------------------------------------------------------

    def run(self) -> CheckedSpec:
        if self.ast.imports:
            self.error("imports must be resolved before checking",
                       self.ast.span)
        self.collect_symbols()
        self.check_defines()
        self.check_predicates()
        self.check_patterns_structure()
        self.check_elements()
        if self.diags:
            raise DiagnosticsError(self.diags + self.warnings)
        return CheckedSpec(self.ast, self.symbols, self.types, self.warnings)

    def error(self, message: str, span: Span) -> None:
        self.diags.append(Diagnostic("error", message, span))

    # -- symbol collection ----------------------------------------------------

    def declare(self, name, kind, ty, span, node=None, enum_index=-1):
        prev = self.symbols.lookup(name)
        if prev is not None:
            self.error(f"name '{name}' already declared as {prev.kind}", span)
            return
        self.symbols.globals[name] = Symbol(name, kind, ty, span, node, enum_index)

    def collect_symbols(self):
        for elem in self.ast.elements:
            if isinstance(elem, n.TypeDef):
                self.declare(elem.name, "typeDef", None, elem.span, elem)
            elif isinstance(elem, n.Predicate):
                self.declare(elem.name, "predicate", None, elem.span, elem)
            elif isinstance(elem, n.Pattern):
                self.declare(elem.name, "pattern", None, elem.span, elem)
        # second pass: types can be resolved now
        for elem in self.ast.elements:
            if isinstance(elem, n.VarDecl):
                ty = self.resolve_type(elem.ty)
                kind = "envVar" if elem.kind == "env" else "sysVar"
                self.declare(elem.name, kind, ty, elem.span, elem)
            elif isinstance(elem, n.Monitor):
                ty = self.resolve_type(elem.ty)
                self.declare(elem.name, "monitor", ty, elem.span, elem)
            elif isinstance(elem, n.Define):
                self.declare(elem.name, "define", None, elem.span, elem)
            elif isinstance(elem, n.Assumption):
                if elem.name:
                    self.declare(elem.name, "assumption", None, elem.span, elem)
            elif isinstance(elem, n.Guarantee):
                if elem.name:
                    self.declare(elem.name, "guarantee", None, elem.span, elem)
            elif isinstance(elem, n.TypeDef):
                self.resolve_type(elem.ty)
        # register enum values appearing in pattern/predicate-local types too
        for elem in self.ast.elements:
            if isinstance(elem, n.Predicate):
                for ty, _ in elem.params:
                    self.resolve_type(ty)
            elif isinstance(elem, n.Pattern):
                for ty, _ in elem.vars:
                    self.resolve_type(ty)

    def resolve_type(self, ty: n.TypeExpr) -> tuple:
        """Resolve a syntactic type to a semantic type, registering enum
        values on first sight of their defining literal."""
        if isinstance(ty, n.BoolType):
            return BOOL
        if isinstance(ty, n.IntRangeType):
            if ty.upper <= ty.lower:
                self.error(f"integer range upper bound must exceed lower "
                           f"bound (got {ty.lower}..{ty.upper})", ty.span)
                return ("int", ty.lower, ty.lower + 1)
            return ("int", ty.lower, ty.upper)
        if isinstance(ty, n.EnumType):
            sem = ("enum", ty.values)
            for i, v in enumerate(ty.values):
                prev = self.symbols.lookup(v)
                if prev is not None and prev.kind == "enumValue" \
                        and prev.ty == sem and prev.enum_index == i:
                    continue  # same value of a structurally identical literal
                self.declare(v, "enumValue", sem, ty.span, ty, enum_index=i)
            return sem
        assert isinstance(ty, n.TypeRef)
        sym = self.symbols.lookup(ty.name)
        if sym is None or sym.kind != "typeDef":
            self.error(f"unknown type '{ty.name}'", ty.span)
            return BOOL
        if ty.name in self._typedef_stack:
            self.error(f"type definition cycle through '{ty.name}'", ty.span)
            return BOOL
        self._typedef_stack.append(ty.name)
        try:
            return self.resolve_type(sym.node.ty)
        finally:
            self._typedef_stack.pop()

    # -- defines ---------------------------------------------------------------

    def define_info(self, name: str, span: Span) -> tuple[tuple, Facts]:
        if name in self.define_type:
            return self.define_type[name], self.define_facts[name]
        if name in self._define_stack:
            self.error(f"recursive define '{name}'", span)
            return BOOL, NO_FACTS
        sym = self.symbols.lookup(name)
        assert sym is not None and sym.kind == "define"
        self._define_stack.append(name)
        try:
            ty, facts = self.visit(sym.node.expr, _Ctx())
        finally:
            self._define_stack.pop()
        self.define_type[name] = ty
        self.define_facts[name] = facts
        return ty, facts

    def check_defines(self):
        for elem in self.ast.elements:
            if isinstance(elem, n.Define):
                self.define_info(elem.name, elem.span)

    # -- predicates --------------------------------------------------------------

    def check_predicates(self):
        for elem in self.ast.elements:
            if not isinstance(elem, n.Predicate):
                continue
            self._check_pred_recursion(elem.name, [], elem.span)
            locals_ = {}
            for ty, p in elem.params:
                if p in locals_:
                    self.error(f"duplicate parameter name '{p}'", elem.span)
                locals_[p] = ("param", self.resolve_type(ty))
            ty, _ = self.visit(elem.body, _Ctx(locals=locals_))
            if ty not in (BOOL, WILDCARD):
                self.error(f"predicate body must be boolean, got "
                           f"{type_name(ty)}", elem.body.span)

    def _pred_callees(self, expr):
        for node in n.walk_exprs(expr):
            if isinstance(node, n.Instance):
                sym = self.symbols.lookup(node.name)
                if sym is not None and sym.kind == "predicate":
                    yield node.name
            elif isinstance(node, n.NameRef):
                sym = self.symbols.lookup(node.name)
                if sym is not None and sym.kind == "define":
                    yield from self._pred_callees(sym.node.expr)

    def _check_pred_recursion(self, name, stack, span):
        if name in stack:
            self.error(f"predicate '{name}' is (transitively) recursive", span)
            return
        sym = self.symbols.lookup(name)
        for callee in set(self._pred_callees(sym.node.body)):
            self._check_pred_recursion(callee, stack + [name], span)

    # -- pattern definitions ------------------------------------------------------

    def check_patterns_structure(self):
        for elem in self.ast.elements:
            if not isinstance(elem, n.Pattern):
                continue
            locals_ = {}
            for p in elem.params:
                if p in locals_:
                    self.error(f"duplicate parameter name '{p}'", elem.span)
                locals_[p] = ("param", WILDCARD)
            for ty, v in elem.vars:
                if v in locals_:
                    self.error(f"duplicate pattern variable '{v}'", elem.span)
                locals_[v] = ("patvar", self.resolve_type(ty))
            justice = [c for c in elem.constraints if c.kind == "alwEv"]
            if len(justice) != 1:
                self.error(f"pattern '{elem.name}' must contain exactly one "
                           f"justice constraint, found {len(justice)}",
                           elem.span)
            for c in elem.constraints:
                ctx = _Ctx(polarity="gar", kind=c.kind, locals=locals_,
                           pattern=elem)
                ty, _ = self.visit(c.expr, ctx)
                if ty not in (BOOL, WILDCARD):
                    self.error("pattern constraint must be boolean",
                               c.expr.span)

    # -- top-level elements ----------------------------------------------------

    def check_elements(self):
        for elem in self.ast.elements:
            if isinstance(elem, (n.Assumption, n.Guarantee)):
                polarity = "asm" if isinstance(elem, n.Assumption) else "gar"
                self.check_constraint(elem.constraint, polarity)
            elif isinstance(elem, n.Monitor):
                self.check_monitor_decl(elem)

    def check_constraint(self, c: n.TempConstraint, polarity: str):
        e = c.expr
        if isinstance(e, n.Instance):
            sym = self.symbols.lookup(e.name)
            if sym is not None and sym.kind == "pattern":
                self.check_pattern_instance(e, sym.node, polarity)
                return
        ty, _ = self.visit(e, _Ctx(polarity=polarity, kind=c.kind))
        if ty not in (BOOL, WILDCARD):
            self.error(f"constraint must be boolean, got {type_name(ty)}",
                       e.span)

    def check_monitor_decl(self, elem: n.Monitor):
        mty = self.resolve_type(elem.ty)
        for c in elem.constraints:
            if c.kind == "alwEv":
                self.error("monitor body may not contain justice constraints",
                           c.span)
                continue
            ty, _ = self.visit(c.expr, _Ctx(polarity="gar", kind=c.kind))
            if ty not in (BOOL, WILDCARD):
                self.error("monitor constraint must be boolean", c.expr.span)

    def check_pattern_instance(self, inst: n.Instance, pat: n.Pattern,
                               polarity: str):
        if len(inst.args) != len(pat.params):
            self.error(f"pattern '{pat.name}' expects {len(pat.params)} "
                       f"argument(s), got {len(inst.args)}", inst.span)
            return
        # arguments are copied into guarantees of every constraint kind:
        # forbid next, allow system references and past operators
        arg_types = []
        for a in inst.args:
            ty, facts = self.visit(a, _Ctx(polarity="gar"))
            if facts.has_next:
                self.error("pattern arguments may not contain 'next'", a.span)
            arg_types.append(ty)
        self.types[id(inst)] = BOOL
        # trial instantiation: re-type the body with concrete argument types
        locals_ = {p: ("param", t) for p, t in zip(pat.params, arg_types)}
        for ty, v in pat.vars:
            locals_[v] = ("patvar", self.resolve_type(ty))
        for c in pat.constraints:
            ctx = _Ctx(polarity="gar", kind=c.kind, locals=locals_,
                       pattern=pat, types_only=True)
            ty, _ = self.visit(c.expr, ctx)
            if ty != BOOL:
                self.error(
                    f"instantiating pattern '{pat.name}' with these argument "
                    f"types makes a constraint non-boolean", inst.span)
                break

    # -- expression walk ---------------------------------------------------------

    def visit(self, e: n.Expr, ctx: _Ctx) -> tuple[tuple, Facts]:
        ty, facts = self._visit(e, ctx)
        self.types[id(e)] = ty
        return ty, facts

    def _apply_usage(self, facts: Facts, ctx: _Ctx, span: Span, what: str):
        """Fire placement rules for a fact-bearing leaf (reference, past
        operator, or instance)."""
        if ctx.types_only:
            return
        if facts.has_next:
            if ctx.under_next:
                self.error(f"{what} contains 'next' and may not be nested "
                           f"inside 'next'", span)
            if ctx.kind in ("ini", "alw", "alwEv"):
                self.error(f"{what} contains 'next', which is not allowed in "
                           f"'{ctx.kind}' constraints", span)
        if ctx.polarity == "asm" and (facts.refs_sys or facts.has_past):
            kind_of_ref = ("past operator" if facts.has_past and not
                           facts.refs_sys else "system variable")
            if ctx.kind == "ini":
                self.error(f"initial assumption references a {kind_of_ref}",
                           span)
            elif ctx.kind == "alw":
                self.error(f"state-invariant assumption references a "
                           f"{kind_of_ref}", span)
            elif ctx.under_next:
                self.error(f"safety assumption nests a {kind_of_ref} inside "
                           f"'next'", span)

    def _visit(self, e: n.Expr, ctx: _Ctx) -> tuple[tuple, Facts]:
        if isinstance(e, n.Const):
            return BOOL, NO_FACTS
        if isinstance(e, n.IntLit):
            return ("int", e.value, e.value), NO_FACTS
        if isinstance(e, n.NameRef):
            return self._visit_ref(e, ctx)
        if isinstance(e, n.Instance):
            return self._visit_instance(e, ctx)
        if isinstance(e, n.Unary):
            return self._visit_unary(e, ctx)
        assert isinstance(e, n.Binary)
        return self._visit_binary(e, ctx)

    def _in_pattern_next(self, ctx: _Ctx) -> bool:
        return (ctx.pattern is not None and ctx.under_next
                and ctx.kind == "trans" and not ctx.types_only)

    def _visit_ref(self, e: n.NameRef, ctx: _Ctx) -> tuple[tuple, Facts]:
        local = ctx.locals.get(e.name)
        if local is not None:
            kind, ty = local
            if kind == "param" and self._in_pattern_next(ctx):
                self.error("only pattern variables may appear inside 'next' "
                           "in pattern safety constraints", e.span)
            return ty, NO_FACTS
        sym = self.symbols.lookup(e.name)
        if sym is not None and self._in_pattern_next(ctx) \
                and sym.kind in ("envVar", "sysVar", "monitor", "define"):
            self.error("only pattern variables may appear inside 'next' in "
                       "pattern safety constraints", e.span)
        if sym is None:
            if not ctx.types_only:
                self.error(f"unknown name '{e.name}'", e.span)
            return BOOL, NO_FACTS
        if sym.kind == "envVar":
            facts = Facts(refs_env=True)
            self._apply_usage(facts, ctx, e.span, f"variable '{e.name}'")
            return sym.ty, facts
        if sym.kind in ("sysVar", "monitor"):
            facts = Facts(refs_sys=True)
            self._apply_usage(facts, ctx, e.span, f"'{e.name}'")
            return sym.ty, facts
        if sym.kind == "enumValue":
            return sym.ty, NO_FACTS
        if sym.kind == "define":
            ty, facts = self.define_info(e.name, e.span)
            self._apply_usage(facts, ctx, e.span, f"define '{e.name}'")
            return ty, facts
        if sym.kind in ("predicate", "pattern"):
            if not ctx.types_only:
                self.error(f"{sym.kind} '{e.name}' must be instantiated with "
                           f"arguments", e.span)
            return BOOL, NO_FACTS
        if not ctx.types_only:
            self.error(f"{sym.kind} name '{e.name}' cannot be referenced in "
                       f"expressions", e.span)
        return BOOL, NO_FACTS

    def _visit_instance(self, e: n.Instance, ctx: _Ctx) -> tuple[tuple, Facts]:
        sym = self.symbols.lookup(e.name)
        if sym is None:
            if not ctx.types_only:
                self.error(f"unknown predicate '{e.name}'", e.span)
            for a in e.args:
                self.visit(a, ctx)
            return BOOL, NO_FACTS
        if sym.kind == "pattern":
            if not ctx.types_only:
                self.error("a pattern instance may only appear as the entire "
                           "expression of an assumption or guarantee", e.span)
            return BOOL, NO_FACTS
        if sym.kind != "predicate":
            if not ctx.types_only:
                self.error(f"'{e.name}' is not a predicate", e.span)
            for a in e.args:
                self.visit(a, ctx)
            return BOOL, NO_FACTS
        pred: n.Predicate = sym.node
        if len(e.args) != len(pred.params):
            if not ctx.types_only:
                self.error(f"predicate '{e.name}' expects {len(pred.params)} "
                           f"argument(s), got {len(e.args)}", e.span)
            return BOOL, NO_FACTS
        arg_facts = {}
        all_facts = NO_FACTS
        for a, (pty, pname) in zip(e.args, pred.params):
            aty, afacts = self.visit(a, ctx)
            want = self.resolve_type(pty)
            if not self._compatible(aty, want):
                if not ctx.types_only:
                    self.error(
                        f"argument '{pname}' of predicate '{e.name}' expects "
                        f"{type_name(want)}, got {type_name(aty)}", a.span)
            arg_facts[pname] = afacts
            all_facts = all_facts | afacts
        body_facts = self._facts_of_body(pred.body, arg_facts, {pred.name})
        facts = all_facts | body_facts
        self._apply_usage(body_facts, ctx, e.span,
                          f"predicate '{e.name}'")
        return BOOL, facts

    def _facts_of_body(self, expr, param_facts, seen) -> Facts:
        """Facts of a predicate body given the facts of its arguments."""
        if isinstance(expr, (n.Const, n.IntLit)):
            return NO_FACTS
        if isinstance(expr, n.NameRef):
            if expr.name in param_facts:
                return param_facts[expr.name]
            sym = self.symbols.lookup(expr.name)
            if sym is None:
                return NO_FACTS
            if sym.kind == "envVar":
                return Facts(refs_env=True)
            if sym.kind in ("sysVar", "monitor"):
                return Facts(refs_sys=True)
            if sym.kind == "define":
                return self.define_info(expr.name, expr.span)[1]
            return NO_FACTS
        if isinstance(expr, n.Instance):
            sym = self.symbols.lookup(expr.name)
            facts = NO_FACTS
            for a in expr.args:
                facts = facts | self._facts_of_body(a, param_facts, seen)
            if sym is not None and sym.kind == "predicate" \
                    and expr.name not in seen:
                inner = {p: self._facts_of_body(a, param_facts, seen)
                         for a, (_, p) in zip(expr.args, sym.node.params)}
                facts = facts | self._facts_of_body(
                    sym.node.body, inner, seen | {expr.name})
            return facts
        if isinstance(expr, n.Unary):
            inner = self._facts_of_body(expr.operand, param_facts, seen)
            if expr.op == "next":
                return inner | Facts(has_next=True)
            if expr.op in ("prev", "historically", "once"):
                return inner | Facts(has_past=True)
            return inner
        assert isinstance(expr, n.Binary)
        left = self._facts_of_body(expr.left, param_facts, seen)
        right = self._facts_of_body(expr.right, param_facts, seen)
        if expr.op == "since":
            return left | right | Facts(has_past=True)
        return left | right

    def _visit_unary(self, e: n.Unary, ctx: _Ctx) -> tuple[tuple, Facts]:
        if e.op == "next":
            if not ctx.types_only:
                if ctx.under_next:
                    self.error("'next' may not be nested inside 'next'",
                               e.span)
                if ctx.kind in ("ini", "alw", "alwEv"):
                    self.error(f"'next' is not allowed in '{ctx.kind}' "
                               f"constraints", e.span)
            ty, facts = self.visit(e.operand, replace(ctx, under_next=True))
            return ty, facts | Facts(has_next=True)
        if e.op in ("prev", "historically", "once"):
            ty, facts = self.visit(e.operand, ctx)
            if not ctx.types_only:
                if ty not in (BOOL, WILDCARD):
                    self.error("past operator operands must be boolean",
                               e.operand.span)
                if facts.has_next:
                    self.error("past operator operands may not contain "
                               "'next'", e.span)
            facts = facts | Facts(has_past=True)
            self._apply_usage(Facts(has_past=True), ctx, e.span,
                              "past operator")
            return BOOL, facts
        if e.op == "not":
            ty, facts = self.visit(e.operand, ctx)
            if ty not in (BOOL, WILDCARD) and not ctx.types_only:
                self.error(f"'!' expects a boolean operand, got "
                           f"{type_name(ty)}", e.operand.span)
            return BOOL, facts
        assert e.op == "neg"
        ty, facts = self.visit(e.operand, ctx)
        if ty == WILDCARD:
            return WILDCARD, facts
        if ty[0] != "int":
            if not ctx.types_only:
                self.error(f"unary '-' expects an integer operand, got "
                           f"{type_name(ty)}", e.operand.span)
            return ("int", 0, 0), facts
        return ("int", -ty[2], -ty[1]), facts

    def _compatible(self, a, b) -> bool:
        if a == WILDCARD or b == WILDCARD:
            return True
        if a == BOOL and b == BOOL:
            return True
        if a[0] == "enum" and b[0] == "enum":
            return a[1] == b[1]
        if a[0] == "int" and b[0] == "int":
            return True
        return False

    def _visit_binary(self, e: n.Binary, ctx: _Ctx) -> tuple[tuple, Facts]:
        lty, lfacts = self.visit(e.left, ctx)
        rty, rfacts = self.visit(e.right, ctx)
        facts = lfacts | rfacts
        op = e.op

        if op in ("and", "or", "implies", "iff"):
            for ty, side in ((lty, e.left), (rty, e.right)):
                if ty not in (BOOL, WILDCARD) and not ctx.types_only:
                    self.error(f"'{op}' expects boolean operands, got "
                               f"{type_name(ty)}", side.span)
            return BOOL, facts

        if op == "since":
            for ty, side in ((lty, e.left), (rty, e.right)):
                if ty not in (BOOL, WILDCARD) and not ctx.types_only:
                    self.error("past operator operands must be boolean",
                               side.span)
            if facts.has_next and not ctx.types_only:
                self.error("past operator operands may not contain 'next'",
                           e.span)
            facts = facts | Facts(has_past=True)
            self._apply_usage(Facts(has_past=True), ctx, e.span,
                              "past operator")
            return BOOL, facts

        if op == "eq":
            if not self._compatible(lty, rty):
                if not ctx.types_only:
                    self.error(f"cannot compare {type_name(lty)} with "
                               f"{type_name(rty)}", e.span)
            return BOOL, facts

        if op in ("lt", "gt", "le", "ge"):
            for ty, side in ((lty, e.left), (rty, e.right)):
                if ty != WILDCARD and ty[0] != "int" and not ctx.types_only:
                    self.error(f"ordering comparisons require integer "
                               f"operands, got {type_name(ty)} (equality is "
                               f"the only comparison for enum and boolean "
                               f"values)", side.span)
            return BOOL, facts

        assert op in ("add", "sub", "mul", "div", "mod")
        for ty, side in ((lty, e.left), (rty, e.right)):
            if ty != WILDCARD and ty[0] != "int" and not ctx.types_only:
                self.error(f"arithmetic '{op}' expects integer operands, got "
                           f"{type_name(ty)}", side.span)
        if WILDCARD in (lty, rty) or lty[0] != "int" or rty[0] != "int":
            return WILDCARD if WILDCARD in (lty, rty) else ("int", 0, 0), facts
        lo1, hi1, lo2, hi2 = lty[1], lty[2], rty[1], rty[2]
        if op == "add":
            return ("int", lo1 + lo2, hi1 + hi2), facts
        if op == "sub":
            return ("int", lo1 - hi2, hi1 - lo2), facts
        if op == "mul":
            corners = [lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2]
            return ("int", min(corners), max(corners)), facts
        # div/mod require a nonzero constant divisor
        c = self.const_value(e.right)
        if c is None:
            if not ctx.types_only:
                self.error(f"'{op}' requires a constant integer divisor",
                           e.right.span)
            return ("int", 0, 0), facts
        if c == 0:
            if not ctx.types_only:
                self.error("division by zero", e.right.span)
            return ("int", 0, 0), facts
        if op == "div":
            a, b = lo1 // c, hi1 // c
            return ("int", min(a, b), max(a, b)), facts
        if c > 0:
            return ("int", 0, c - 1), facts
        return ("int", c + 1, 0), facts

    def const_value(self, e: n.Expr) -> int | None:
        """Fold a constant integer expression; None if not constant."""
        if isinstance(e, n.IntLit):
            return e.value
        if isinstance(e, n.NameRef):
            sym = self.symbols.lookup(e.name)
            if sym is not None and sym.kind == "define":
                return self.const_value(sym.node.expr)
            return None
        if isinstance(e, n.Unary) and e.op == "neg":
            v = self.const_value(e.operand)
            return None if v is None else -v
        if isinstance(e, n.Binary) and e.op in ("add", "sub", "mul", "div",
                                                "mod"):
            a = self.const_value(e.left)
            b = self.const_value(e.right)
            if a is None or b is None:
                return None
            if e.op == "add":
                return a + b
            if e.op == "sub":
                return a - b
            if e.op == "mul":
                return a * b
            if b == 0:
                return None
            return a // b if e.op == "div" else a % b
        return None


def check(ast: n.SpecAst) -> CheckedSpec:
    """Check a parsed specification (imports already resolved)."""
    return Checker(ast).run()


# ---------------------------------------------------------------------------
# import resolution


def _default_loader(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


class _ImportResolver:
    def __init__(self, loader, catalog):
        self.loader = loader
        self.catalog = catalog
        self.diags: list[Diagnostic] = []
        self.asts: dict[str, n.SpecAst] = {}
        self.stack: list[str] = []
        self.order: list[str] = []

    def load(self, path: str, span: Span) -> n.SpecAst | None:
        norm = os.path.normpath(path)
        if norm in self.stack:
            cycle = " -> ".join(self.stack[self.stack.index(norm):] + [norm])
            self.diags.append(Diagnostic("error",
                                         f"import cycle: {cycle}", span))
            return None
        if norm in self.asts:
            return self.asts[norm]
        try:
            text = self.loader(norm)
        except OSError as exc:
            self.diags.append(Diagnostic("error",
                                         f"cannot read import: {exc}", span))
            return None
        if self.catalog is not None:
            self.catalog.add(norm, text)
        try:
            ast = sx_parse(text, norm)
        except DiagnosticsError as exc:
            self.diags.extend(exc.diagnostics)
            return None
        self.asts[norm] = ast
        self.stack.append(norm)
        base = os.path.dirname(norm)
        for imp in ast.imports:
            self.load(os.path.normpath(os.path.join(base, imp)), ast.span)
        self.stack.pop()
        self.order.append(norm)
        return ast


def _param_enum_values(params) -> set[str]:
    vals = set()
    for ty, _ in params:
        if isinstance(ty, n.EnumType):
            vals.update(ty.values)
    return vals


def _check_imported_body(elem, predicates, diags):
    """Imported predicate and pattern bodies must be self-contained: only
    parameters, local pattern variables, locally declared enum values, and
    other predicates may be referenced."""
    if isinstance(elem, n.Predicate):
        allowed = {p for _, p in elem.params} | _param_enum_values(elem.params)
        exprs = [elem.body]
        what = f"predicate '{elem.name}'"
    else:
        allowed = set(elem.params) | {v for _, v in elem.vars}
        allowed |= _param_enum_values(elem.vars)
        exprs = [c.expr for c in elem.constraints]
        what = f"pattern '{elem.name}'"
    for expr in exprs:
        for node in n.walk_exprs(expr):
            if isinstance(node, n.NameRef) and node.name not in allowed:
                diags.append(Diagnostic(
                    "error",
                    f"imported {what} references foreign name "
                    f"'{node.name}'; imported bodies may only reference "
                    f"their parameters and other predicates", node.span))
            elif isinstance(node, n.Instance) \
                    and node.name not in predicates:
                diags.append(Diagnostic(
                    "error",
                    f"imported {what} instantiates unknown predicate "
                    f"'{node.name}'", node.span))


def resolve_imports(entry_path: str, loader=None, catalog=None) -> n.SpecAst:
    """Parse entry_path, copy all transitively referenced patterns and
    predicates from its imports into the returned AST, and drop the import
    clauses. Import paths resolve relative to the importing file."""
    loader = loader or _default_loader
    resolver = _ImportResolver(loader, catalog)
    entry = resolver.load(entry_path, Span(entry_path, 0, 0))
    if resolver.diags:
        raise DiagnosticsError(resolver.diags)
    assert entry is not None
    if not entry.imports:
        return entry

    diags: list[Diagnostic] = []
    entry_norm = os.path.normpath(entry_path)
    own_names = {e.name for e in entry.elements
                 if isinstance(e, (n.Predicate, n.Pattern))}
    importable: dict[str, n.Element] = {}
    predicates = {e.name for a in resolver.asts.values()
                  for e in a.elements if isinstance(e, n.Predicate)}
    for path in resolver.order:
        if path == entry_norm:
            continue
        for elem in resolver.asts[path].elements:
            if not isinstance(elem, (n.Predicate, n.Pattern)):
                continue
            if elem.name in own_names or elem.name in importable:
                diags.append(Diagnostic(
                    "error", f"pattern/predicate '{elem.name}' is declared "
                    f"in more than one imported file", elem.span))
                continue
            importable[elem.name] = elem

    # transitively collect the referenced definitions
    def referenced(exprs, acc):
        for expr in exprs:
            for node in n.walk_exprs(expr):
                if isinstance(node, n.Instance) and node.name in importable \
                        and node.name not in acc:
                    acc.add(node.name)
                    target = importable[node.name]
                    if isinstance(target, n.Predicate):
                        referenced([target.body], acc)
                    else:
                        referenced([c.expr for c in target.constraints], acc)

    needed: set[str] = set()
    entry_exprs = []
    for elem in entry.elements:
        if isinstance(elem, (n.Assumption, n.Guarantee)):
            entry_exprs.append(elem.constraint.expr)
        elif isinstance(elem, n.Define):
            entry_exprs.append(elem.expr)
        elif isinstance(elem, n.Predicate):
            entry_exprs.append(elem.body)
        elif isinstance(elem, (n.Monitor, n.Pattern)):
            entry_exprs.extend(c.expr for c in elem.constraints)
    referenced(entry_exprs, needed)

    copied = [importable[name] for name in sorted(needed)]
    for elem in copied:
        _check_imported_body(elem, predicates, diags)
    if diags:
        raise DiagnosticsError(diags)
    return n.SpecAst((), entry.name, entry.elements + tuple(copied),
                     entry.span)
