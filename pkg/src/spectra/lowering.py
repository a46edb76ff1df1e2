"""Lowering passes: from a checked specification to the boolean kernel.

Pass order is fixed: defines/typedefs -> predicates -> patterns ->
monitors -> state invariants -> past operators -> enums/ints. Each pass
removes its construct entirely; the final pass bit-blasts typed variables
and arithmetic into boolean circuits (ripple-carry adders, shift-add
multipliers, restoring division by constants, comparison chains).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .kernel import KernelConstraint, KernelSpec, KernelVar, Origin
from .semcheck import CheckedSpec
from .syntax import nodes as n

TRUE = n.Const(True)
FALSE = n.Const(False)


class FreshNames:
    """Generates collision-free auxiliary variable names."""

    def __init__(self, used):
        self.used = set(used)
        self.counter = 0

    def fresh(self, base: str) -> str:
        while True:
            name = f"__aux{self.counter}_{base}"
            self.counter += 1
            if name not in self.used:
                self.used.add(name)
                return name

    def bit_name(self, var: str, i: int) -> str:
        name = f"{var}_{i}"
        while name in self.used:
            name = "_" + name
        self.used.add(name)
        return name


def _names_in_use(ast: n.SpecAst) -> set[str]:
    used = set()
    for elem in ast.elements:
        for attr in ("name",):
            name = getattr(elem, attr, None)
            if isinstance(name, str):
                used.add(name)
        if isinstance(elem, n.Pattern):
            used.update(v for _, v in elem.vars)
    return used


# ---------------------------------------------------------------------------
# boolean expression builders with constant folding


def bnot(a):
    if isinstance(a, n.Const):
        return n.Const(not a.value)
    if isinstance(a, n.Unary) and a.op == "not":
        return a.operand
    return n.Unary("not", a)


def band(a, b):
    if isinstance(a, n.Const):
        return b if a.value else FALSE
    if isinstance(b, n.Const):
        return a if b.value else FALSE
    return n.Binary("and", a, b)


def bor(a, b):
    if isinstance(a, n.Const):
        return TRUE if a.value else b
    if isinstance(b, n.Const):
        return TRUE if b.value else a
    return n.Binary("or", a, b)


def biff(a, b):
    if isinstance(a, n.Const):
        return b if a.value else bnot(b)
    if isinstance(b, n.Const):
        return a if b.value else bnot(a)
    return n.Binary("iff", a, b)


def bxor(a, b):
    if isinstance(a, n.Const):
        return bnot(b) if a.value else b
    if isinstance(b, n.Const):
        return bnot(a) if b.value else a
    return bnot(n.Binary("iff", a, b))


def ball(exprs):
    out = TRUE
    for e in exprs:
        out = band(out, e)
    return out


def bany(exprs):
    out = FALSE
    for e in exprs:
        out = bor(out, e)
    return out


# ---------------------------------------------------------------------------
# substitution


def subst(e: n.Expr, env: dict[str, n.Expr]) -> n.Expr:
    """Simultaneous capture-free replacement of name references."""
    if isinstance(e, (n.Const, n.IntLit)):
        return e
    if isinstance(e, n.NameRef):
        return env.get(e.name, e)
    if isinstance(e, n.Instance):
        return n.Instance(e.name, tuple(subst(a, env) for a in e.args), e.span)
    if isinstance(e, n.Unary):
        return n.Unary(e.op, subst(e.operand, env), e.span)
    assert isinstance(e, n.Binary)
    return n.Binary(e.op, subst(e.left, env), subst(e.right, env), e.span)


def _map_constraint(c: n.TempConstraint, fn) -> n.TempConstraint:
    return n.TempConstraint(c.kind, fn(c.expr), c.span)


# ---------------------------------------------------------------------------
# pass 0: attach origins to user elements


def tag_origins(ast: n.SpecAst) -> n.SpecAst:
    out = []
    asm_i = gar_i = 0
    for i, elem in enumerate(ast.elements):
        if isinstance(elem, n.Assumption):
            asm_i += 1
            label = elem.name or f"asm #{asm_i}"
            origin = Origin(f"c{i}", "assumption", label, elem.span)
            out.append(replace(elem, origin=origin))
        elif isinstance(elem, n.Guarantee):
            gar_i += 1
            label = elem.name or f"gar #{gar_i}"
            origin = Origin(f"c{i}", "guarantee", label, elem.span)
            out.append(replace(elem, origin=origin))
        else:
            out.append(elem)
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 1: defines and type definitions


def expand_defines_and_typedefs(ast: n.SpecAst) -> n.SpecAst:
    defines = {e.name: e for e in ast.elements if isinstance(e, n.Define)}
    typedefs = {e.name: e for e in ast.elements if isinstance(e, n.TypeDef)}

    def res_type(ty: n.TypeExpr) -> n.TypeExpr:
        if isinstance(ty, n.TypeRef):
            return res_type(typedefs[ty.name].ty)
        return ty

    expanded: dict[str, n.Expr] = {}

    def define_expr(name: str) -> n.Expr:
        if name not in expanded:
            expanded[name] = rewrite(defines[name].expr, frozenset())
        return expanded[name]

    def rewrite(e: n.Expr, shadow: frozenset) -> n.Expr:
        if isinstance(e, n.NameRef):
            if e.name in defines and e.name not in shadow:
                return define_expr(e.name)
            return e
        if isinstance(e, (n.Const, n.IntLit)):
            return e
        if isinstance(e, n.Instance):
            return n.Instance(e.name, tuple(rewrite(a, shadow)
                                            for a in e.args), e.span)
        if isinstance(e, n.Unary):
            return n.Unary(e.op, rewrite(e.operand, shadow), e.span)
        assert isinstance(e, n.Binary)
        return n.Binary(e.op, rewrite(e.left, shadow),
                        rewrite(e.right, shadow), e.span)

    out = []
    for elem in ast.elements:
        if isinstance(elem, (n.Define, n.TypeDef)):
            continue
        if isinstance(elem, n.VarDecl):
            out.append(replace(elem, ty=res_type(elem.ty)))
        elif isinstance(elem, (n.Assumption, n.Guarantee)):
            out.append(replace(elem, constraint=_map_constraint(
                elem.constraint, lambda x: rewrite(x, frozenset()))))
        elif isinstance(elem, n.Predicate):
            shadow = frozenset(p for _, p in elem.params)
            out.append(replace(
                elem,
                params=tuple((res_type(t), p) for t, p in elem.params),
                body=rewrite(elem.body, shadow)))
        elif isinstance(elem, n.Monitor):
            out.append(replace(
                elem, ty=res_type(elem.ty),
                constraints=tuple(_map_constraint(
                    c, lambda x: rewrite(x, frozenset()))
                    for c in elem.constraints)))
        elif isinstance(elem, n.Pattern):
            shadow = frozenset(elem.params) | frozenset(v for _, v in
                                                        elem.vars)
            out.append(replace(
                elem,
                vars=tuple((res_type(t), v) for t, v in elem.vars),
                constraints=tuple(_map_constraint(
                    c, lambda x: rewrite(x, shadow))
                    for c in elem.constraints)))
        else:
            out.append(elem)
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 2: predicates


def expand_predicates(ast: n.SpecAst) -> n.SpecAst:
    preds = {e.name: e for e in ast.elements if isinstance(e, n.Predicate)}

    def rewrite(e: n.Expr) -> n.Expr:
        if isinstance(e, (n.Const, n.IntLit, n.NameRef)):
            return e
        if isinstance(e, n.Instance):
            args = tuple(rewrite(a) for a in e.args)
            pred = preds.get(e.name)
            if pred is None:  # a pattern instance
                return n.Instance(e.name, args, e.span)
            env = {p: a for (_, p), a in zip(pred.params, args)}
            return rewrite(subst(pred.body, env))
        if isinstance(e, n.Unary):
            return n.Unary(e.op, rewrite(e.operand), e.span)
        assert isinstance(e, n.Binary)
        return n.Binary(e.op, rewrite(e.left), rewrite(e.right), e.span)

    out = []
    for elem in ast.elements:
        if isinstance(elem, n.Predicate):
            continue
        if isinstance(elem, (n.Assumption, n.Guarantee)):
            out.append(replace(elem, constraint=_map_constraint(
                elem.constraint, rewrite)))
        elif isinstance(elem, n.Monitor):
            out.append(replace(elem, constraints=tuple(
                _map_constraint(c, rewrite) for c in elem.constraints)))
        elif isinstance(elem, n.Pattern):
            out.append(replace(elem, constraints=tuple(
                _map_constraint(c, rewrite) for c in elem.constraints)))
        else:
            out.append(elem)
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 3: patterns


def expand_patterns(ast: n.SpecAst, fresh: FreshNames | None = None) \
        -> n.SpecAst:
    if fresh is None:
        fresh = FreshNames(_names_in_use(ast))
    patterns = {e.name: e for e in ast.elements if isinstance(e, n.Pattern)}
    out = []
    for elem in ast.elements:
        if isinstance(elem, n.Pattern):
            continue
        if isinstance(elem, (n.Assumption, n.Guarantee)) \
                and isinstance(elem.constraint.expr, n.Instance) \
                and elem.constraint.expr.name in patterns:
            inst = elem.constraint.expr
            pat = patterns[inst.name]
            env = {p: a for p, a in zip(pat.params, inst.args)}
            vmap = {}
            for ty, v in pat.vars:
                name = fresh.fresh(v)
                vmap[v] = name
                out.append(n.VarDecl("sys", ty, name, elem.span))
            env.update({v: n.NameRef(nm, elem.span)
                        for v, nm in vmap.items()})
            is_asm = isinstance(elem, n.Assumption)
            for c in pat.constraints:
                inst_c = n.TempConstraint(c.kind, subst(c.expr, env),
                                          elem.span)
                if c.kind == "alwEv" and is_asm:
                    out.append(n.Assumption(elem.name, inst_c, elem.span,
                                            elem.origin))
                elif c.kind == "alwEv":
                    out.append(n.Guarantee(elem.name, inst_c, elem.span,
                                           elem.origin))
                else:
                    out.append(n.Guarantee(None, inst_c, elem.span,
                                           elem.origin))
        else:
            out.append(elem)
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 4: monitors


def expand_monitors(ast: n.SpecAst) -> n.SpecAst:
    out = []
    for elem in ast.elements:
        if not isinstance(elem, n.Monitor):
            out.append(elem)
            continue
        origin = Origin(f"m:{elem.name}", "monitor", elem.name, elem.span)
        out.append(n.VarDecl("sys", elem.ty, elem.name, elem.span))
        for c in elem.constraints:
            out.append(n.Guarantee(None, c, elem.span, origin))
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 5: state invariants (alw)


def expand_state_invariants(ast: n.SpecAst) -> n.SpecAst:
    out = []
    for elem in ast.elements:
        if not isinstance(elem, (n.Assumption, n.Guarantee)) \
                or elem.constraint.kind != "alw":
            out.append(elem)
            continue
        e = elem.constraint.expr
        cls = type(elem)
        ini_name = f"{elem.name}_ini" if elem.name else None
        trans_name = f"{elem.name}_trans" if elem.name else None
        out.append(cls(ini_name, n.TempConstraint("ini", e, elem.span),
                       elem.span, elem.origin))
        out.append(cls(trans_name,
                       n.TempConstraint("trans", n.Unary("next", e, e.span),
                                        elem.span),
                       elem.span, elem.origin))
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 6: past operators


def expand_pastltl(ast: n.SpecAst, fresh: FreshNames | None = None) \
        -> n.SpecAst:
    if fresh is None:
        fresh = FreshNames(_names_in_use(ast))
    out = []
    for elem in ast.elements:
        if not isinstance(elem, (n.Assumption, n.Guarantee)):
            out.append(elem)
            continue
        decls: list[n.Element] = []
        defs: list[n.Element] = []
        cache: dict = {}
        # the defining constraints of an auxiliary variable belong to the
        # hosting element but are marked so analyses can tell them apart
        aux_origin = None
        if elem.origin is not None:
            aux_origin = replace(elem.origin,
                                 category=elem.origin.category + "+aux")

        def mk_aux(base, span):
            name = fresh.fresh(base)
            decls.append(n.VarDecl("sys", n.BoolType(), name, span))
            return name

        def translate(e: n.Expr) -> n.Expr:
            if isinstance(e, (n.Const, n.IntLit, n.NameRef)):
                return e
            if isinstance(e, n.Instance):
                raise AssertionError("instances must be expanded before "
                                     "past operators")
            if isinstance(e, n.Binary) and e.op == "since":
                left = translate(e.left)
                right = translate(e.right)
                key = ("since", left, right)
                if key in cache:
                    return cache[key]
                aux = mk_aux("since", e.span)
                ref = n.NameRef(aux, e.span)
                ini = biff(ref, right)
                step = biff(n.Unary("next", ref, e.span),
                            bor(n.Unary("next", right, e.span),
                                band(ref, n.Unary("next", left, e.span))))
                defs.append(n.Guarantee(None, n.TempConstraint(
                    "ini", ini, e.span), elem.span, aux_origin))
                defs.append(n.Guarantee(None, n.TempConstraint(
                    "trans", step, e.span), elem.span, aux_origin))
                cache[key] = ref
                return ref
            if isinstance(e, n.Unary):
                if e.op == "prev":
                    operand = translate(e.operand)
                    key = ("prev", operand)
                    if key in cache:
                        return cache[key]
                    aux = mk_aux("prev", e.span)
                    ref = n.NameRef(aux, e.span)
                    defs.append(n.Guarantee(None, n.TempConstraint(
                        "ini", bnot(ref), e.span), elem.span, aux_origin))
                    step = biff(n.Unary("next", ref, e.span), operand)
                    defs.append(n.Guarantee(None, n.TempConstraint(
                        "trans", step, e.span), elem.span, aux_origin))
                    cache[key] = ref
                    return ref
                if e.op == "once":
                    return translate(n.Binary("since", TRUE, e.operand,
                                              e.span))
                if e.op == "historically":
                    inner = n.Binary("since", TRUE,
                                     bnot(e.operand), e.span)
                    return bnot(translate(inner))
                return n.Unary(e.op, translate(e.operand), e.span)
            assert isinstance(e, n.Binary)
            return n.Binary(e.op, translate(e.left), translate(e.right),
                            e.span)

        new_expr = translate(elem.constraint.expr)
        out.extend(decls)
        out.extend(defs)
        out.append(replace(elem, constraint=n.TempConstraint(
            elem.constraint.kind, new_expr, elem.constraint.span)))
    return replace(ast, elements=tuple(out))


# ---------------------------------------------------------------------------
# pass 7: enums and bounded integers -> boolean kernel


@dataclass(frozen=True)
class VarEncoding:
    """Bit-level encoding of one pre-lowering variable."""

    name: str
    kind: str  # "env" | "sys"
    ty: tuple  # ('bool',) | ('enum', values) | ('int', lo, hi)
    bits: tuple[str, ...]  # kernel variable names, least significant first

    @property
    def width(self) -> int:
        return len(self.bits)

    def domain(self):
        """All declared values, in encoding order."""
        if self.ty[0] == "bool":
            return (False, True)
        if self.ty[0] == "enum":
            return tuple(self.ty[1])
        return tuple(range(self.ty[1], self.ty[2] + 1))

    def _index_of(self, value) -> int:
        if self.ty[0] == "bool":
            if not isinstance(value, bool):
                raise ValueError(f"{self.name}: expected boolean, got "
                                 f"{value!r}")
            return int(value)
        if self.ty[0] == "enum":
            if value not in self.ty[1]:
                raise ValueError(f"{self.name}: {value!r} is not one of "
                                 f"{self.ty[1]}")
            return self.ty[1].index(value)
        if not isinstance(value, int) or isinstance(value, bool) \
                or not self.ty[1] <= value <= self.ty[2]:
            raise ValueError(f"{self.name}: {value!r} outside "
                             f"Int({self.ty[1]}..{self.ty[2]})")
        return value - self.ty[1]

    def encode(self, value) -> dict[str, bool]:
        if self.ty[0] == "bool":
            return {self.bits[0]: bool(value)} if self.bits else {}
        idx = self._index_of(value)
        return {b: bool((idx >> i) & 1) for i, b in enumerate(self.bits)}

    def decode(self, assignment: dict[str, bool]):
        if self.ty[0] == "bool":
            return bool(assignment[self.bits[0]])
        idx = 0
        for i, b in enumerate(self.bits):
            if assignment[b]:
                idx |= 1 << i
        if self.ty[0] == "enum":
            values = self.ty[1]
            if idx >= len(values):
                raise ValueError(f"{self.name}: invalid encoding {idx}")
            return values[idx]
        value = self.ty[1] + idx
        if value > self.ty[2]:
            raise ValueError(f"{self.name}: invalid encoding {idx}")
        return value


def _sem_of_type(ty: n.TypeExpr) -> tuple:
    if isinstance(ty, n.BoolType):
        return ("bool",)
    if isinstance(ty, n.EnumType):
        return ("enum", ty.values)
    assert isinstance(ty, n.IntRangeType), "type references must be expanded"
    return ("int", ty.lower, ty.upper)


def _width_for(count: int) -> int:
    return (count - 1).bit_length() if count > 1 else 0


# bit-vector circuit helpers; vectors are lists of boolean exprs, LSB first


def const_bits(value: int, width: int) -> list:
    assert value >= 0
    return [TRUE if (value >> i) & 1 else FALSE for i in range(width)]


def _pad(bits, width):
    return list(bits) + [FALSE] * (width - len(bits))


def vadd(a, b):
    w = max(len(a), len(b))
    a, b = _pad(a, w), _pad(b, w)
    out = []
    carry = FALSE
    for i in range(w):
        s = bxor(bxor(a[i], b[i]), carry)
        carry = bor(band(a[i], b[i]), band(carry, bxor(a[i], b[i])))
        out.append(s)
    out.append(carry)
    return out


def vadd_const(bits, k: int):
    if k == 0:
        return list(bits)
    return vadd(bits, const_bits(k, k.bit_length()))


def vnot(bits):
    return [bnot(b) for b in bits]


def vmul(a, b):
    out = [FALSE]
    for j, bj in enumerate(b):
        partial = [FALSE] * j + [band(bj, ai) for ai in a]
        out = vadd(out, partial)
    return out


def vmul_const(bits, k: int):
    assert k >= 0
    out = [FALSE]
    for j in range(k.bit_length()):
        if (k >> j) & 1:
            out = vadd(out, [FALSE] * j + list(bits))
    return out


def veq(a, b):
    w = max(len(a), len(b))
    a, b = _pad(a, w), _pad(b, w)
    return ball(biff(ai, bi) for ai, bi in zip(a, b))


def vlt(a, b):
    """Unsigned a < b."""
    w = max(len(a), len(b))
    a, b = _pad(a, w), _pad(b, w)
    less = FALSE
    for ai, bi in zip(a, b):  # LSB to MSB
        less = bor(band(bnot(ai), bi), band(biff(ai, bi), less))
    return less


def vle(a, b):
    return bnot(vlt(b, a))


def vmux(g, a, b):
    """Bitwise g ? a : b."""
    w = max(len(a), len(b))
    a, b = _pad(a, w), _pad(b, w)
    return [bor(band(g, ai), band(bnot(g), bi)) for ai, bi in zip(a, b)]


def vsub_const(bits, k: int):
    """bits - k modulo 2^len(bits); callers ensure bits >= k."""
    w = len(bits)
    comp = ((1 << w) - k) % (1 << w)
    return vadd(bits, const_bits(comp, w))[:w]


def vdivmod_const(bits, c: int):
    """Unsigned restoring division by a positive constant."""
    assert c > 0
    wc = max(c.bit_length(), 1)
    r: list = []
    q: list = []
    for i in reversed(range(len(bits))):
        r = [bits[i]] + r
        ge = bnot(vlt(r, const_bits(c, wc)))
        r = vmux(ge, vsub_const(r, c), r)
        r = r[:wc]  # remainder stays < c
        q.append(ge)
    q.reverse()
    return q, r


# typed values during constraint lowering:
#   ('b', expr) | ('i', bits, offset) | ('e', bits, values) |
#   ('ev', index, values)


class _BitBlaster:
    def __init__(self, encodings: dict[str, VarEncoding],
                 enum_values: dict[str, tuple]):
        self.enc = encodings
        self.enum_values = enum_values  # value name -> (values, index)

    # -- next distribution -------------------------------------------------

    def push_next(self, e: n.Expr, under: bool = False) -> n.Expr:
        if isinstance(e, (n.Const, n.IntLit)):
            return e
        if isinstance(e, n.NameRef):
            if under and e.name in self.enc:
                return n.Unary("next", e, e.span)
            return e
        if isinstance(e, n.Unary):
            if e.op == "next":
                assert not under
                return self.push_next(e.operand, True)
            return n.Unary(e.op, self.push_next(e.operand, under), e.span)
        assert isinstance(e, n.Binary), f"unexpected {e!r}"
        return n.Binary(e.op, self.push_next(e.left, under),
                        self.push_next(e.right, under), e.span)

    # -- lowering -------------------------------------------------------------

    def bool_expr(self, e: n.Expr) -> n.Expr:
        v = self.value(self.push_next(e))
        assert v[0] == "b", "constraint must lower to a boolean"
        return v[1]

    def _var_value(self, name: str, wrap_next: bool):
        enc = self.enc[name]

        def bit(b):
            ref = n.NameRef(b)
            return n.Unary("next", ref) if wrap_next else ref

        if enc.ty[0] == "bool":
            return ("b", bit(enc.bits[0]))
        bits = [bit(b) for b in enc.bits]
        if enc.ty[0] == "enum":
            if not bits:
                return ("ev", 0, enc.ty[1])
            return ("e", bits, enc.ty[1])
        return ("i", bits, enc.ty[1])

    def value(self, e: n.Expr):
        if isinstance(e, n.Const):
            return ("b", e)
        if isinstance(e, n.IntLit):
            return ("i", [], e.value)
        if isinstance(e, n.NameRef):
            if e.name in self.enc:
                return self._var_value(e.name, False)
            if e.name in self.enum_values:
                values, idx = self.enum_values[e.name]
                return ("ev", idx, values)
            raise AssertionError(f"unresolved name {e.name!r} at lowering")
        if isinstance(e, n.Unary):
            if e.op == "next":
                assert isinstance(e.operand, n.NameRef)
                return self._var_value(e.operand.name, True)
            if e.op == "not":
                return ("b", bnot(self._b(e.operand)))
            assert e.op == "neg"
            bits, off = self._i(e.operand)
            w = len(bits)
            return ("i", vnot(bits), -off - ((1 << w) - 1))
        assert isinstance(e, n.Binary)
        op = e.op
        if op in ("and", "or", "implies", "iff"):
            a, b = self._b(e.left), self._b(e.right)
            if op == "and":
                return ("b", band(a, b))
            if op == "or":
                return ("b", bor(a, b))
            if op == "iff":
                return ("b", biff(a, b))
            return ("b", bor(bnot(a), b))
        if op == "eq":
            return ("b", self._eq(e.left, e.right))
        if op in ("lt", "gt", "le", "ge"):
            a_bits, a_off = self._i(e.left)
            b_bits, b_off = self._i(e.right)
            if op in ("gt", "ge"):
                a_bits, a_off, b_bits, b_off = b_bits, b_off, a_bits, a_off
                op = "lt" if op == "gt" else "le"
            d = a_off - b_off
            if d >= 0:
                u, v = vadd_const(a_bits, d), b_bits
            else:
                u, v = a_bits, vadd_const(b_bits, -d)
            return ("b", vlt(u, v) if op == "lt" else vle(u, v))
        # arithmetic
        a_bits, a_off = self._i(e.left)
        if op in ("div", "mod"):
            c = self._const_int(e.right)
            return self._divmod(a_bits, a_off, c, op)
        b_bits, b_off = self._i(e.right)
        if op == "add":
            return ("i", vadd(a_bits, b_bits), a_off + b_off)
        if op == "sub":
            wb = len(b_bits)
            neg_bits = vnot(b_bits)
            neg_off = -b_off - ((1 << wb) - 1)
            return ("i", vadd(a_bits, neg_bits), a_off + neg_off)
        assert op == "mul"
        return self._mul(a_bits, a_off, b_bits, b_off)

    def _b(self, e):
        v = self.value(e)
        assert v[0] == "b", f"expected boolean operand"
        return v[1]

    def _i(self, e):
        v = self.value(e)
        assert v[0] == "i", "expected integer operand"
        return v[1], v[2]

    def _const_int(self, e) -> int:
        v = self.value(e)
        assert v[0] == "i"
        bits, off = v[1], v[2]
        folded = 0
        for i, b in enumerate(bits):
            assert isinstance(b, n.Const), "divisor must be constant"
            if b.value:
                folded |= 1 << i
        return off + folded

    def _eq(self, left, right):
        a, b = self.value(left), self.value(right)
        kinds = (a[0], b[0])
        if kinds == ("b", "b"):
            return biff(a[1], b[1])
        if "e" in kinds or "ev" in kinds:
            if a[0] == "ev" and b[0] == "ev":
                return TRUE if a[1] == b[1] else FALSE
            if a[0] == "ev":
                a, b = b, a
            if b[0] == "ev":
                idx = b[1]
                if not a[1]:  # zero-width enum variable
                    return TRUE if idx == 0 else FALSE
                return ball(bit if (idx >> i) & 1 else bnot(bit)
                            for i, bit in enumerate(a[1]))
            return veq(a[1], b[1])
        # integers
        a_bits, a_off = a[1], a[2]
        b_bits, b_off = b[1], b[2]
        d = a_off - b_off
        if d >= 0:
            return veq(vadd_const(a_bits, d), b_bits)
        return veq(a_bits, vadd_const(b_bits, -d))

    def _mul(self, a_bits, a_off, b_bits, b_off):
        wa, wb = len(a_bits), len(b_bits)
        terms = []
        offset = a_off * b_off
        if a_bits and b_bits:
            terms.append(vmul(a_bits, b_bits))
        # a_off * v  and  b_off * u, sign handled via bitwise complement
        for k, bits in ((a_off, b_bits), (b_off, a_bits)):
            if k == 0 or not bits:
                continue
            if k > 0:
                terms.append(vmul_const(bits, k))
            else:
                terms.append(vmul_const(vnot(bits), -k))
                offset -= (-k) * ((1 << len(bits)) - 1)
        out: list = []
        for t in terms:
            out = vadd(out, t)
        return ("i", out, offset)

    def _divmod(self, bits, off, c, op):
        assert c != 0
        if c > 0:
            r0 = off % c
            q0 = off // c
            ub = vadd_const(bits, r0)
            qb, rb = vdivmod_const(ub, c)
            if op == "div":
                return ("i", qb, q0)
            return ("i", rb, 0)
        # c < 0: floor(a/c) = -floor((a + |c| - 1) / |c|)
        m = -c
        shifted_off = off + m - 1
        r0 = shifted_off % m
        q0 = shifted_off // m
        ub = vadd_const(bits, r0)
        qb, _ = vdivmod_const(ub, m)
        neg_bits = vnot(qb)
        neg_off = -q0 - ((1 << len(qb)) - 1)
        if op == "div":
            return ("i", neg_bits, neg_off)
        # a mod c = a - c * (a div c)
        q = ("i", neg_bits, neg_off)
        prod = self._mul(q[1], q[2], [], c)
        neg_prod_bits = vnot(prod[1])
        neg_prod_off = -prod[2] - ((1 << len(prod[1])) - 1)
        return ("i", vadd(bits, neg_prod_bits), off + neg_prod_off)


def expand_enums_and_ints(ast: n.SpecAst,
                          enum_values: dict[str, tuple] | None = None,
                          fresh: FreshNames | None = None) \
        -> tuple[KernelSpec, dict[str, VarEncoding]]:
    """Bit-blast typed variables and arithmetic into the boolean kernel."""
    if fresh is None:
        fresh = FreshNames(_names_in_use(ast))
    decls = [e for e in ast.elements if isinstance(e, n.VarDecl)]
    if enum_values is None:
        enum_values = {}
        for d in decls:
            sem = _sem_of_type(d.ty)
            if sem[0] == "enum":
                for i, v in enumerate(sem[1]):
                    enum_values[v] = (sem[1], i)

    encodings: dict[str, VarEncoding] = {}
    kvars: list[KernelVar] = []
    validity: list[KernelConstraint] = []
    for d in decls:
        sem = _sem_of_type(d.ty)
        if sem[0] == "bool":
            bits = (d.name,)
        else:
            count = len(sem[1]) if sem[0] == "enum" \
                else sem[2] - sem[1] + 1
            width = _width_for(count)
            bits = tuple(fresh.bit_name(d.name, i) for i in range(width))
        enc = VarEncoding(d.name, d.kind, sem, bits)
        encodings[d.name] = enc
        kvars.extend(KernelVar(b, d.kind) for b in bits)
        count = len(enc.domain())
        if enc.width and count < (1 << enc.width):
            refs = [n.NameRef(b) for b in bits]
            valid = vlt(refs, const_bits(count, enc.width))
            polarity = "asm" if d.kind == "env" else "gar"
            origin = Origin(f"v:{d.name}", "vardecl", d.name, d.span)
            validity.append(KernelConstraint(
                polarity, "ini", None, valid, origin, d.span))
            primed = [n.Unary("next", r) for r in refs]
            valid_next = vlt(primed, const_bits(count, enc.width))
            validity.append(KernelConstraint(
                polarity, "trans", None, valid_next, origin, d.span))

    blaster = _BitBlaster(encodings, enum_values)
    constraints: list[KernelConstraint] = list(validity)
    for elem in ast.elements:
        if isinstance(elem, n.VarDecl):
            continue
        assert isinstance(elem, (n.Assumption, n.Guarantee)), \
            f"unexpected element at bit-blasting: {type(elem).__name__}"
        kind = elem.constraint.kind
        assert kind in ("ini", "trans", "alwEv"), \
            "state invariants must be expanded before bit-blasting"
        polarity = "asm" if isinstance(elem, n.Assumption) else "gar"
        expr = blaster.bool_expr(elem.constraint.expr)
        constraints.append(KernelConstraint(
            polarity, kind, elem.name, expr, elem.origin, elem.span))

    return (KernelSpec(ast.name, tuple(kvars), tuple(constraints)),
            encodings)


# ---------------------------------------------------------------------------
# pipeline driver


@dataclass
class Lowered:
    kernel: KernelSpec
    encodings: dict[str, VarEncoding]


def lower(checked: CheckedSpec) -> Lowered:
    """Run the full pass chain on a checked specification."""
    ast = checked.ast
    assert not ast.imports, "imports must be resolved before lowering"
    enum_values = {
        s.name: (s.ty[1], s.enum_index)
        for s in checked.symbols.of_kind("enumValue")
    }
    fresh = FreshNames(set(checked.symbols.globals)
                       | {v for e in ast.elements if isinstance(e, n.Pattern)
                          for _, v in e.vars})
    ast = tag_origins(ast)
    ast = expand_defines_and_typedefs(ast)
    ast = expand_predicates(ast)
    ast = expand_patterns(ast, fresh)
    ast = expand_monitors(ast)
    ast = expand_state_invariants(ast)
    ast = expand_pastltl(ast, fresh)
    kernel, encodings = expand_enums_and_ints(ast, enum_values, fresh)
    return Lowered(kernel, encodings)
