"""Specification-quality analyses.

- unrealizable_core: delta debugging (ddmin) over the guarantee list with
  the GR(1) solver as the test oracle; the result is 1-minimal.
- find_trivial: constraints whose lowered BDD is constant.
- check_monitor: semantic determinism/completeness of a monitor, checked
  symbolically over the valid encodings of all other variables.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .diagnostics import Span
from .game import build_expr, to_gr1
from .gr1 import solve
from .kernel import KernelSpec
from .lowering import Lowered, lower
from .semcheck import CheckedSpec, check
from .syntax import nodes as n


@dataclass(frozen=True)
class GuaranteeId:
    key: str
    label: str
    span: Span


@dataclass
class CoreReport:
    core: list  # GuaranteeId entries, source order
    checks_performed: int
    minimal: bool


class RealizableError(Exception):
    pass


def _is_guarantee_piece(c) -> bool:
    return c.origin is not None and c.origin.category.startswith("guarantee")


def _subset_kernel(kernel: KernelSpec, keys: frozenset) -> KernelSpec:
    kept = tuple(c for c in kernel.constraints
                 if not _is_guarantee_piece(c) or c.origin.key in keys)
    return replace(kernel, constraints=kept)


def unrealizable_core(spec: CheckedSpec | Lowered) -> CoreReport:
    """Locally minimal subset of the guarantees that is already
    unrealizable; all assumptions are kept throughout."""
    low = spec if isinstance(spec, Lowered) else lower(spec)
    kernel = low.kernel

    candidates: list[GuaranteeId] = []
    seen = set()
    for c in kernel.constraints:
        if _is_guarantee_piece(c) and c.origin.key not in seen:
            seen.add(c.origin.key)
            candidates.append(GuaranteeId(c.origin.key, c.origin.label,
                                          c.origin.span))

    checks = 0
    cache: dict[frozenset, bool] = {}

    def realizable(keys: frozenset) -> bool:
        nonlocal checks
        if keys in cache:
            return cache[keys]
        checks += 1
        ok, _ = solve(to_gr1(_subset_kernel(kernel, keys)))
        cache[keys] = ok
        return ok

    all_keys = frozenset(g.key for g in candidates)
    if realizable(all_keys):
        raise RealizableError("specification is realizable; there is no "
                              "unrealizable core")

    def fails(items) -> bool:
        return not realizable(frozenset(g.key for g in items))

    items = _ddmin(candidates, fails)

    # post-hoc 1-minimality verification
    minimal = fails(items)
    for drop in items:
        rest = [g for g in items if g is not drop]
        if fails(rest):
            minimal = False
            break
    return CoreReport(items, checks, minimal)


def _ddmin(items: list, fails) -> list:
    """Zeller's ddmin; `fails` must hold for the full list and is
    monotone-ish in practice (the result is still verified afterwards)."""
    assert fails(items)
    granularity = 2
    while len(items) >= 2:
        chunk_size = max(1, len(items) // granularity)
        chunks = [items[i:i + chunk_size]
                  for i in range(0, len(items), chunk_size)]
        reduced = False
        for chunk in chunks:
            if len(chunk) < len(items) and fails(chunk):
                items = chunk
                granularity = 2
                reduced = True
                break
        if not reduced:
            for i in range(len(chunks)):
                complement = [g for j, c in enumerate(chunks) if j != i
                              for g in c]
                if complement and len(complement) < len(items) \
                        and fails(complement):
                    items = complement
                    granularity = max(granularity - 1, 2)
                    reduced = True
                    break
        if not reduced:
            if granularity >= len(items):
                break
            granularity = min(len(items), granularity * 2)
    return items


# ---------------------------------------------------------------------------
# trivial constraints


@dataclass(frozen=True)
class TrivialFinding:
    key: str
    label: str
    span: Span
    verdict: str  # "triviallyTrue" | "triviallyFalse"


def find_trivial(spec: CheckedSpec | Lowered) -> list[TrivialFinding]:
    """Assumptions/guarantees whose lowered BDD is a constant."""
    low = spec if isinstance(spec, Lowered) else lower(spec)
    game = to_gr1(low)
    m = game.manager

    groups: dict[str, list] = {}
    meta: dict[str, tuple] = {}
    for a in game.assertions:
        o = a.constraint.origin
        if o is None or o.category not in ("assumption", "guarantee"):
            continue  # validity pieces, monitor pieces, aux definitions
        groups.setdefault(o.key, []).append(a.bdd)
        meta.setdefault(o.key, (o.label, o.span))
    findings = []
    for key, bdds in groups.items():
        conj = m.true
        for b in bdds:
            conj = conj & b
        if conj.is_true or conj.is_false:
            label, span = meta[key]
            verdict = "triviallyTrue" if conj.is_true else "triviallyFalse"
            findings.append(TrivialFinding(key, label, span, verdict))
    return findings


# ---------------------------------------------------------------------------
# monitor determinism / completeness


@dataclass
class MonitorVerdict:
    deterministic: bool
    complete: bool
    witness: dict | None = None
    detail: str = ""


def check_monitor(spec: CheckedSpec, monitor_name: str) -> MonitorVerdict:
    """A monitor must assign a unique value to its variable in every step
    and must not restrict any other variable: viewed as an automaton over
    the other variables it has to be deterministic and complete."""
    monitor = None
    for elem in spec.ast.elements:
        if isinstance(elem, n.Monitor) and elem.name == monitor_name:
            monitor = elem
    if monitor is None:
        raise KeyError(f"unknown monitor '{monitor_name}'")

    # reduce to declarations plus monitors; the target monitor's lowered
    # pieces carry its origin, auxiliaries from past operators included
    reduced_elems = tuple(e for e in spec.ast.elements
                          if not isinstance(e, (n.Assumption, n.Guarantee)))
    reduced = check(replace(spec.ast, elements=reduced_elems))
    low = lower(reduced)
    kernel = low.kernel
    key = f"m:{monitor_name}"

    target_ini = [c for c in kernel.constraints
                  if c.origin is not None and c.origin.key == key
                  and c.kind == "ini"]
    target_trans = [c for c in kernel.constraints
                    if c.origin is not None and c.origin.key == key
                    and c.kind == "trans"]

    # monitor-owned bits: the monitor variable plus auxiliaries referenced
    # by its own pieces
    own_vars = {monitor_name}
    for c in target_ini + target_trans:
        for node in n.walk_exprs(c.expr):
            if isinstance(node, n.NameRef) and node.name.startswith("__aux"):
                base = node.name
                for enc in low.encodings.values():
                    if base in enc.bits:
                        own_vars.add(enc.name)

    game = to_gr1(low)
    m = game.manager
    var_ids = game.var_ids

    def bits_of(names):
        out = []
        for enc in low.encodings.values():
            if enc.name in names:
                out.extend(enc.bits)
        return out

    v_bits = bits_of(own_vars)
    other_bits = [v.name for v in kernel.vars if v.name not in v_bits]
    v_levels = [m.level_of(var_ids[b]) for b in v_bits]
    other_levels = [m.level_of(var_ids[b]) for b in other_bits]
    state_levels = [m.level_of(var_ids[v.name]) for v in kernel.vars]
    v_levels_p = [lv + 1 for lv in v_levels]
    other_levels_p = [lv + 1 for lv in other_levels]

    def validity(names) -> "BddRef":
        out = m.true
        for a in game.assertions:
            o = a.constraint.origin
            if o is not None and o.category == "vardecl" \
                    and a.kind == "ini" and o.label in names:
                out = out & a.bdd
        return out

    d_v = validity(own_vars)
    d_others = validity({enc.name for enc in low.encodings.values()
                         if enc.name not in own_vars})
    d_all = d_v & d_others

    iota = m.true
    for c in target_ini:
        iota = iota & build_expr(m, var_ids, c.expr)
    rho = m.true
    for c in target_trans:
        rho = rho & build_expr(m, var_ids, c.expr)

    copies = {b: m.declare(f"__copy_{b}") for b in v_bits}

    def decode_witness(assignment) -> dict:
        out = {}
        for enc in low.encodings.values():
            try:
                now = {b: assignment[m.level_of(var_ids[b])]
                       for b in enc.bits}
                out[enc.name] = enc.decode(now)
            except (KeyError, ValueError):
                pass
            try:
                nxt = {b: assignment[m.level_of(var_ids[b], True)]
                       for b in enc.bits}
                out[enc.name + "'"] = enc.decode(nxt)
            except (KeyError, ValueError):
                pass
        return out

    verdict = MonitorVerdict(True, True)

    def fail(kind, bad, levels, message):
        assignment = m.sat_one(bad, levels)
        if kind == "det":
            verdict.deterministic = False
        else:
            verdict.complete = False
        if verdict.witness is None and assignment is not None:
            verdict.witness = decode_witness(assignment)
            verdict.detail = message

    # initially complete: every valid assignment of the other variables
    # admits a valid monitor value
    f_ini = m.exists_levels(v_levels, d_v & iota)
    bad = d_others & ~f_ini
    if not bad.is_false:
        fail("comp", bad, other_levels,
             "no initial monitor value exists for this input")

    # initially deterministic: at most one valid monitor value
    pairs = (d_v & iota) & m.rename(
        d_v & iota, {lv: m.level_of(copies[b])
                     for lv, b in zip(v_levels, v_bits)})
    same = m.true
    for lv, b in zip(v_levels, v_bits):
        same = same & m.mk_var(var_ids[b]).iff(m.mk_var(copies[b]))
    bad = d_others & pairs & ~same
    if not bad.is_false:
        fail("det", bad, other_levels + v_levels
             + [m.level_of(copies[b]) for b in v_bits],
             "two initial monitor values satisfy the constraints")

    # step complete: from every valid state, for every valid next value of
    # the other variables, some valid next monitor value satisfies rho
    d_others_p = m.rename_prime(d_others)
    d_v_p = m.rename_prime(d_v)
    f_step = m.exists_levels(v_levels_p, d_v_p & rho)
    bad = d_all & d_others_p & ~f_step
    if not bad.is_false:
        fail("comp", bad, state_levels + other_levels_p,
             "no next monitor value exists for this step")

    # step deterministic
    step_rel = d_v_p & rho
    pairs = step_rel & m.rename(
        step_rel, {lv: m.level_of(copies[b])
                   for lv, b in zip(v_levels_p, v_bits)})
    same = m.true
    for lv, b in zip(v_levels_p, v_bits):
        same = same & m.mk_var(var_ids[b], True).iff(m.mk_var(copies[b]))
    bad = d_all & d_others_p & pairs & ~same
    if not bad.is_false:
        fail("det", bad, state_levels + other_levels_p + v_levels_p
             + [m.level_of(copies[b]) for b in v_bits],
             "two next monitor values satisfy the constraints")

    return verdict
