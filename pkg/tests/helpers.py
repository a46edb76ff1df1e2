"""Shared test utilities: corpus loading, random generators, trace
evaluation, controller driving, and the fair-cycle product check."""

from __future__ import annotations

import os
import random

import numpy as np

from spectra.gr1 import SymbolicController
from spectra.lowering import Lowered, lower
from spectra.oracle import eval_pastltl, eval_step
from spectra.semcheck import CheckedSpec, check, resolve_imports
from spectra.syntax import nodes as n
from spectra.syntax import parse

CORPUS = os.path.join(os.path.dirname(__file__), "corpus")


def corpus_paths(include_lib=False):
    out = []
    for root, _, files in os.walk(CORPUS):
        if not include_lib and os.path.basename(root) == "lib":
            continue
        for f in sorted(files):
            if f.endswith(".spectra"):
                out.append(os.path.join(root, f))
    return sorted(out)


def load_checked(path: str) -> CheckedSpec:
    return check(resolve_imports(path))


def check_source(src: str, filename="<test>") -> CheckedSpec:
    return check(parse(src, filename))


def lower_source(src: str, filename="<test>") -> Lowered:
    return lower(check_source(src, filename))


# ---------------------------------------------------------------------------
# random boolean expressions (printer round-trip property)

_BOOL_OPS = ("and", "or", "implies", "iff")
_CMP_OPS = ("eq", "lt", "gt", "le", "ge")
_ARITH_OPS = ("add", "sub", "mul")


def random_bool_expr(rng: random.Random, names, depth: int) -> n.Expr:
    roll = rng.random()
    if depth == 0 or roll < 0.25:
        c = rng.randrange(len(names) + 2)
        if c == len(names):
            return n.Const(True)
        if c == len(names) + 1:
            return n.Const(False)
        return n.NameRef(names[c])
    roll = rng.random()
    if roll < 0.18:
        op = rng.choice(("not", "prev", "historically", "once"))
        return n.Unary(op, random_bool_expr(rng, names, depth - 1))
    if roll < 0.26:
        return n.Unary("next", random_bool_expr(rng, names, 0))
    if roll < 0.38:
        return n.Binary("since", random_bool_expr(rng, names, depth - 1),
                        random_bool_expr(rng, names, depth - 1))
    if roll < 0.5:
        return n.Binary(rng.choice(_CMP_OPS),
                        random_int_expr(rng, names, depth - 1),
                        random_int_expr(rng, names, depth - 1))
    op = rng.choice(_BOOL_OPS)
    return n.Binary(op, random_bool_expr(rng, names, depth - 1),
                    random_bool_expr(rng, names, depth - 1))


def random_int_expr(rng: random.Random, names, depth: int) -> n.Expr:
    if depth == 0 or rng.random() < 0.4:
        if rng.random() < 0.5:
            return n.IntLit(rng.randrange(0, 20))
        return n.NameRef(names[rng.randrange(len(names))])
    if rng.random() < 0.2:
        return n.Unary("neg", random_int_expr(rng, names, depth - 1))
    op = rng.choice(_ARITH_OPS + ("div", "mod"))
    left = random_int_expr(rng, names, depth - 1)
    if op in ("div", "mod"):
        return n.Binary(op, left, n.IntLit(rng.randrange(1, 9)))
    return n.Binary(op, left, random_int_expr(rng, names, depth - 1))


# ---------------------------------------------------------------------------
# past formulas, traces, and the auxiliary-variable simulation

_PAST_KINDS = ("var", "not", "and", "or", "prev", "once", "historically",
               "since")


def random_past_formula(rng: random.Random, names, depth: int) -> n.Expr:
    if depth == 0 or rng.random() < 0.3:
        return n.NameRef(names[rng.randrange(len(names))])
    kind = rng.choice(_PAST_KINDS[1:])
    if kind == "not":
        return n.Unary("not", random_past_formula(rng, names, depth - 1))
    if kind in ("prev", "once", "historically"):
        return n.Unary(kind, random_past_formula(rng, names, depth - 1))
    if kind == "since":
        return n.Binary("since",
                        random_past_formula(rng, names, depth - 1),
                        random_past_formula(rng, names, depth - 1))
    return n.Binary(kind, random_past_formula(rng, names, depth - 1),
                    random_past_formula(rng, names, depth - 1))


def random_trace(rng: random.Random, names, length: int):
    return [{v: rng.random() < 0.5 for v in names} for _ in range(length)]


def simulate_past_translation(formula: n.Expr, names, trace):
    """Run the auxiliary-variable translation of a past formula and return
    its valuation at every trace position, computed purely from the
    generated ini/trans definitions."""
    from spectra.lowering import expand_pastltl, tag_origins
    from spectra.syntax.nodes import (Guarantee, SpecAst, TempConstraint,
                                      VarDecl)

    elements = [VarDecl("env", n.BoolType(), v) for v in names]
    elements.append(Guarantee("host", TempConstraint("alwEv", formula)))
    ast = SpecAst((), "P", tuple(elements))
    expanded = expand_pastltl(tag_origins(ast))

    aux_defs = []  # (aux name, ini expr, trans expr) in creation order
    pending: dict[str, list] = {}
    replaced = None
    for elem in expanded.elements:
        if isinstance(elem, VarDecl) and elem.kind == "sys":
            pending[elem.name] = [None, None]
            aux_defs.append(elem.name)
        elif isinstance(elem, Guarantee) and elem.name is None:
            # definition pieces reference exactly one not-yet-defined aux
            target = _defined_aux(elem.constraint.expr, pending)
            slot = 0 if elem.constraint.kind == "ini" else 1
            pending[target][slot] = elem.constraint.expr
        elif isinstance(elem, Guarantee) and elem.name == "host":
            replaced = elem.constraint.expr
    assert replaced is not None

    states = [dict(s) for s in trace]
    # solve the deterministic definitions step by step, creation order
    for name in aux_defs:
        ini_expr = pending[name][0]
        states[0][name] = _solve_bit(ini_expr, name, states[0], None)
    for i in range(1, len(states)):
        for name in aux_defs:
            trans_expr = pending[name][1]
            states[i][name] = _solve_bit(trans_expr, name, states[i - 1],
                                         states[i])
    return [eval_step(replaced, st) for st in states], states


def _defined_aux(expr, pending):
    for node in n.walk_exprs(expr):
        if isinstance(node, n.NameRef) and node.name in pending:
            return node.name
    raise AssertionError("definition referencing no auxiliary")


def _solve_bit(expr, name, now, nxt):
    """The defining constraints are deterministic: exactly one value of
    the new bit satisfies them."""
    target = now if nxt is None else nxt
    candidates = []
    for value in (False, True):
        target[name] = value
        if eval_step(expr, now, nxt):
            candidates.append(value)
    assert len(candidates) == 1, "auxiliary definition not deterministic"
    target[name] = candidates[0]
    return candidates[0]


# ---------------------------------------------------------------------------
# driving controllers and checking guarantees on traces


def drive_controller(ctrl: SymbolicController, steps: int,
                     rng: random.Random):
    """Random legal environment play; returns the raw trace as a list of
    {bit name: bool} states. Raises if the controller is ever stuck."""
    game = ctrl.game
    m = game.manager
    x_levels = game.x_levels
    x_levels_p = [lv + 1 for lv in x_levels]
    yz_levels = game.y_levels + game.levels(ctrl.mem_vars)
    yz_levels_p = [lv + 1 for lv in yz_levels]
    name_of = {m.level_of(vid): name
               for name, vid in game.x_vars + game.y_vars + ctrl.mem_vars}

    def named(assign):
        return {name_of[lv]: val for lv, val in assign.items()
                if lv in name_of}

    x_options = list(m.sat_all(game.theta_e, x_levels))
    assert x_options, "theta_e unsatisfiable"
    x0 = rng.choice(x_options)
    choice = m.sat_one(m.restrict(ctrl.init, x0), yz_levels)
    assert choice is not None
    cur = {**x0, **choice}
    trace = [named(cur)]
    for _ in range(steps):
        moves = list(m.sat_all(m.restrict(game.rho_e, cur), x_levels_p))
        if not moves:
            break  # environment deadlock: the play ends
        xp = rng.choice(moves)
        pick = m.sat_one(m.restrict(m.restrict(ctrl.trans, cur), xp),
                         yz_levels_p)
        assert pick is not None, "controller incomplete for a legal move"
        cur = {lv - 1: v for lv, v in {**xp, **pick}.items()}
        trace.append(named(cur))
    return trace


def eval_trace_vec(expr: n.Expr, now: dict, nxt: dict | None):
    """Vectorized kernel-expression evaluation over a whole trace; `now`
    and `nxt` map variable names to aligned boolean arrays."""
    if isinstance(expr, n.Const):
        return np.bool_(expr.value)
    if isinstance(expr, n.NameRef):
        return now[expr.name]
    if isinstance(expr, n.Unary):
        if expr.op == "not":
            return ~eval_trace_vec(expr.operand, now, nxt)
        assert expr.op == "next" and nxt is not None
        return eval_trace_vec(expr.operand, nxt, None)
    assert isinstance(expr, n.Binary)
    a = eval_trace_vec(expr.left, now, nxt)
    b = eval_trace_vec(expr.right, now, nxt)
    if expr.op == "and":
        return a & b
    if expr.op == "or":
        return a | b
    if expr.op == "implies":
        return ~a | b
    assert expr.op in ("iff", "eq")
    return a == b


def assert_trace_satisfies_guarantees(kernel, trace):
    """Independent check of all ini/trans guarantees over a recorded
    trace (bit-level, via direct expression evaluation)."""
    if not trace:
        return
    arrays = {v: np.array([st[v] for st in trace], dtype=bool)
              for v in trace[0]}
    now = {v: a[:-1] for v, a in arrays.items()}
    nxt = {v: a[1:] for v, a in arrays.items()}
    first = {v: a[:1] for v, a in arrays.items()}
    for c in kernel.guarantees:
        if c.kind == "ini":
            ok = np.broadcast_to(eval_trace_vec(c.expr, first, None), (1,))
            assert bool(ok.all()), f"initial guarantee violated: {c.label}"
        elif c.kind == "trans" and len(trace) > 1:
            ok = np.broadcast_to(eval_trace_vec(c.expr, now, nxt),
                                 (len(trace) - 1,))
            assert bool(ok.all()), f"safety guarantee violated: {c.label}"


# ---------------------------------------------------------------------------
# fair-cycle soundness on the explicit product


def check_fair_scc_soundness(conc, game):
    """In the reachable product, any strongly connected part that can
    satisfy all environment justice goals must not be able to avoid a
    system justice goal."""
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(range(len(conc.states)))
    for (sid, _), nid in conc.transitions.items():
        g.add_edge(sid, nid)

    m = game.manager
    names = conc.var_names

    def holds(bdd, state_key):
        assignment = {}
        for name, value in zip(names, state_key):
            vid = game.var_ids.get(name)
            if vid is not None:
                assignment[m.level_of(vid)] = value
        return m.eval(bdd, assignment)

    je_sets = [{i for i, st in enumerate(conc.states) if holds(b, st)}
               for b in game.je]
    js_sets = [{i for i, st in enumerate(conc.states) if holds(b, st)}
               for b in game.js]

    def nontrivial(component, graph):
        comp = set(component)
        return any(v in comp for u in comp for v in graph.successors(u))

    for scc in nx.strongly_connected_components(g):
        if not nontrivial(scc, g):
            continue
        if not all(scc & je for je in je_sets):
            continue  # no environment-fair cycle inside
        for j, js in enumerate(js_sets):
            sub = g.subgraph(set(scc) - js)
            for inner in nx.strongly_connected_components(sub):
                if not nontrivial(inner, sub):
                    continue
                if all(inner & je for je in je_sets):
                    raise AssertionError(
                        f"fair cycle avoiding system justice goal {j}: "
                        f"{sorted(inner)[:6]}...")
