"""Symbolic GR(1) problem: the eight game components as BDDs.

Variable order is kernel declaration order with each variable's primed
twin adjacent, so current/next renaming is a level shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bdd import BddManager, BddRef
from .kernel import KernelConstraint, KernelSpec
from .lowering import Lowered, VarEncoding
from .syntax import nodes as n


@dataclass
class NamedAssertion:
    label: str
    kind: str  # "ini" | "trans" | "alwEv"
    polarity: str  # "asm" | "gar"
    bdd: BddRef
    constraint: KernelConstraint


@dataclass
class GR1Problem:
    """theta_e mentions only X; rho_e no primed Y; justice goals no primes."""

    manager: BddManager
    name: str
    x_vars: list  # (name, var id) controlled by the environment
    y_vars: list  # (name, var id) controlled by the system
    theta_e: BddRef
    theta_s: BddRef
    rho_e: BddRef
    rho_s: BddRef
    je: list  # justice assumptions, non-empty (true inserted if missing)
    js: list  # justice guarantees, non-empty
    assertions: list = field(default_factory=list)  # all named constraints
    kernel: KernelSpec | None = None
    encodings: dict[str, VarEncoding] | None = None

    @property
    def var_ids(self) -> dict[str, int]:
        return {name: vid for name, vid in self.x_vars + self.y_vars}

    def levels(self, vars_, primed=False):
        return [self.manager.level_of(vid, primed) for _, vid in vars_]

    @property
    def x_levels(self):
        return self.levels(self.x_vars)

    @property
    def y_levels(self):
        return self.levels(self.y_vars)

    def assumptions(self, kind=None):
        return [a for a in self.assertions
                if a.polarity == "asm" and (kind is None or a.kind == kind)]


def build_expr(manager: BddManager, var_ids: dict[str, int], e: n.Expr,
               memo=None, primed=False) -> BddRef:
    """Translate a kernel boolean expression to a BDD; variables under
    next map to their primed twins."""
    if memo is None:
        memo = {}
    key = (id(e), primed)
    if key in memo:
        return memo[key]
    if isinstance(e, n.Const):
        res = manager.true if e.value else manager.false
    elif isinstance(e, n.NameRef):
        res = manager.mk_var(var_ids[e.name], primed)
    elif isinstance(e, n.Unary):
        if e.op == "not":
            res = ~build_expr(manager, var_ids, e.operand, memo, primed)
        elif e.op == "next":
            assert not primed, "nested next survived checking"
            res = build_expr(manager, var_ids, e.operand, memo, True)
        else:
            raise ValueError(f"{e.op!r} is not a kernel operator")
    else:
        assert isinstance(e, n.Binary)
        a = build_expr(manager, var_ids, e.left, memo, primed)
        b = build_expr(manager, var_ids, e.right, memo, primed)
        ops = {"and": "and", "or": "or", "implies": "imp", "iff": "iff",
               "eq": "iff"}
        if e.op not in ops:
            raise ValueError(f"{e.op!r} is not a kernel operator")
        res = manager.apply(ops[e.op], a, b)
    memo[key] = res
    return res


def to_gr1(lowered: Lowered | KernelSpec,
           max_nodes: int | None = None) -> GR1Problem:
    """Map a kernel specification to its GR(1) synthesis problem."""
    if isinstance(lowered, KernelSpec):
        kernel, encodings = lowered, None
    else:
        kernel, encodings = lowered.kernel, lowered.encodings
    m = BddManager(max_nodes)
    var_ids: dict[str, int] = {}
    x_vars, y_vars = [], []
    for v in kernel.vars:
        vid = m.declare(v.name)
        var_ids[v.name] = vid
        (x_vars if v.kind == "env" else y_vars).append((v.name, vid))

    memo: dict = {}
    theta_e = theta_s = rho_e = rho_s = m.true
    je, js = [], []
    assertions = []
    for c in kernel.constraints:
        bdd = build_expr(m, var_ids, c.expr, memo)
        assertions.append(NamedAssertion(c.label, c.kind, c.polarity, bdd, c))
        if c.kind == "ini":
            if c.polarity == "asm":
                theta_e = theta_e & bdd
            else:
                theta_s = theta_s & bdd
        elif c.kind == "trans":
            if c.polarity == "asm":
                rho_e = rho_e & bdd
            else:
                rho_s = rho_s & bdd
        else:
            (je if c.polarity == "asm" else js).append(bdd)
    # an empty justice list behaves as the single justice goal "true"
    if not je:
        je = [m.true]
    if not js:
        js = [m.true]
    return GR1Problem(m, kernel.name, x_vars, y_vars, theta_e, theta_s,
                      rho_e, rho_s, je, js, assertions, kernel, encodings)


SymbolicGame = GR1Problem
