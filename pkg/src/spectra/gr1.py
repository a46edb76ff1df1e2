"""Symbolic GR(1) realizability and controller synthesis.

The winning region is the standard three-nested fixpoint

    Z = nu Z. AND_j mu Y. OR_i nu X.
        (Js_j & pre(Z)) | pre(Y) | (~Je_i & pre(X))

over the controllable predecessor pre. Strategy extraction keeps the
intermediate Y-chains and X-fixpoints and combines the three classic
rules: advance the goal counter on goal visits, descend the Y-chain
otherwise, or wait inside an X-fixpoint while some environment justice
goal is violated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .bdd import BddLimitError, BddRef
from .game import GR1Problem

logger = logging.getLogger(__name__)


class SolveResourceError(Exception):
    """Node limit hit during solving; carries partial progress."""

    def __init__(self, limit, progress):
        self.limit = limit
        self.progress = progress
        super().__init__(f"BDD node limit {limit} exceeded during GR(1) "
                         f"solving ({progress})")


class UnrealizableError(Exception):
    pass


@dataclass
class SynthesisMemo:
    z: BddRef
    # per goal j: increasing chain Y_j[0]=false .. Y_j[R]=Z
    ychains: list
    # per goal j, per chain step r (1-based), per env goal i: the X-fixpoint
    xsets: list


def controllable_pre(game: GR1Problem, v: BddRef) -> BddRef:
    """States from which, for every environment move allowed by rho_e, the
    system can pick a move satisfying rho_s that lands in v."""
    m = game.manager
    vp = m.rename_prime(v)
    can = m.exists_levels(game.levels(game.y_vars, primed=True),
                          game.rho_s & vp)
    return m.forall_levels(game.levels(game.x_vars, primed=True),
                           game.rho_e.implies(can))


def _chain_for(game, js_j, z, record):
    """mu Y iteration for one system goal against a fixed Z."""
    m = game.manager
    pre_z = controllable_pre(game, z)
    goal_core = js_j & pre_z
    y = m.false
    chain = [y]
    xrows = []
    while True:
        core = goal_core | controllable_pre(game, y)
        new_y = m.false
        xrow = []
        for je_i in game.je:
            x = z if record else m.true
            while True:
                new_x = core | (~je_i & controllable_pre(game, x))
                if new_x == x:
                    break
                x = new_x
            xrow.append(x)
            new_y = new_y | x
        if new_y == y:
            break
        y = new_y
        chain.append(y)
        xrows.append(xrow)
    return y, chain, xrows


def solve(game: GR1Problem) -> tuple[bool, SynthesisMemo]:
    """Decide strict realizability; the memo supports extraction."""
    m = game.manager
    z = m.true
    rounds = 0
    try:
        while True:
            rounds += 1
            changed = False
            for j, js_j in enumerate(game.js):
                y, _, _ = _chain_for(game, js_j, z, record=False)
                if y != z:
                    changed = True
                z = y
            if not changed:
                break
        # Z is now a fixpoint: recompute the chains once for extraction
        ychains, xsets = [], []
        for js_j in game.js:
            y, chain, xrows = _chain_for(game, js_j, z, record=True)
            assert y == z, "chain must close at the winning region"
            ychains.append(chain)
            xsets.append(xrows)
    except BddLimitError as exc:
        raise SolveResourceError(
            exc.limit, f"outer round {rounds}, {len(m)} live nodes") from exc
    memo = SynthesisMemo(z, ychains, xsets)
    win_initial = m.exists_levels(game.y_levels, game.theta_s & z)
    ok = m.forall_levels(game.x_levels, game.theta_e.implies(win_initial))
    logger.debug("solve: %s (winning region %d nodes)",
                 ok.is_true, m.size(z))
    return ok.is_true, memo


def is_realizable(game: GR1Problem) -> bool:
    return solve(game)[0]


@dataclass
class SymbolicController:
    """Winning strategy as initial-state and transition relations over
    X, Y, and the binary goal counter M (and primed twins in trans)."""

    game: GR1Problem
    mem_vars: list  # (name, var id)
    init: BddRef
    trans: BddRef
    winning: BddRef

    @property
    def manager(self):
        return self.game.manager

    @property
    def state_vars(self):
        return self.game.x_vars + self.game.y_vars + self.mem_vars

    @property
    def state_levels(self):
        return self.game.levels(self.state_vars)

    def mem_value(self, assignment: dict[int, bool]) -> int:
        value = 0
        for k, (_, vid) in enumerate(self.mem_vars):
            if assignment.get(self.manager.level_of(vid), False):
                value |= 1 << k
        return value


def _mem_eq(game, mem_vars, j, primed):
    m = game.manager
    out = m.true
    for k, (_, vid) in enumerate(mem_vars):
        bit = m.mk_var(vid, primed)
        out = out & (bit if (j >> k) & 1 else ~bit)
    return out


def synthesize_symbolic(game: GR1Problem,
                        memo: SynthesisMemo) -> SymbolicController:
    """Extract the standard three-rule strategy from the fixpoint memo."""
    m = game.manager
    n_goals = len(game.js)
    mem_bits = (n_goals - 1).bit_length()
    mem_vars = [(f"__mem_{k}", m.declare(f"__mem_{k}"))
                for k in range(mem_bits)]

    z = memo.z
    zp = m.rename_prime(z)
    trans = m.false
    for j, js_j in enumerate(game.js):
        here = _mem_eq(game, mem_vars, j, primed=False)
        stay = _mem_eq(game, mem_vars, j, primed=True)
        advance = _mem_eq(game, mem_vars, (j + 1) % n_goals, primed=True)
        # rule 1: the current goal holds now; head anywhere inside Z and
        # pursue the next goal
        rho1 = (z & js_j) & game.rho_s & zp & advance
        chain = memo.ychains[j]
        rows = memo.xsets[j]
        rho23 = m.false
        for r in range(1, len(chain)):
            at_rank = chain[r] & ~chain[r - 1]
            if r >= 2:
                # rule 2: strictly descend the Y-chain
                rho23 = rho23 | (at_rank & game.rho_s
                                 & m.rename_prime(chain[r - 1]) & stay)
            prior = m.false
            for i, je_i in enumerate(game.je):
                x_set = rows[r - 1][i]
                # rule 3: some environment justice goal is violated here;
                # wait inside this X-fixpoint
                guard = at_rank & x_set & ~prior & ~je_i
                rho23 = rho23 | (guard & game.rho_s
                                 & m.rename_prime(x_set) & stay)
                prior = prior | x_set
        trans = trans | (here & (rho1 | (~js_j & rho23)))
    init = game.theta_s & z & _mem_eq(game, mem_vars, 0, primed=False)
    return SymbolicController(game, mem_vars, init, trans, z)


def synthesize(game: GR1Problem) -> SymbolicController:
    realizable, memo = solve(game)
    if not realizable:
        raise UnrealizableError("specification is unrealizable")
    return synthesize_symbolic(game, memo)


# ---------------------------------------------------------------------------
# concrete enumeration


class ConcreteCapExceeded(Exception):
    def __init__(self, cap):
        super().__init__(
            f"concrete controller exceeds {cap} states; enumeration does "
            f"not scale, use the symbolic controller output instead "
            f"(or raise --max-states)")
        self.cap = cap


@dataclass
class ConcreteController:
    """Explicit Mealy-style automaton: complete for the environment and
    deterministic for the system."""

    var_names: list  # x names + y names + memory names, state bit order
    x_count: int
    states: list  # tuples of bools, one per state
    initial: dict  # x-assignment tuple -> state index
    transitions: dict  # (state index, x'-assignment tuple) -> state index


def enumerate_concrete(ctrl: SymbolicController,
                       max_states: int = 50000) -> ConcreteController:
    m = ctrl.manager
    game = ctrl.game
    x_levels = game.x_levels
    x_levels_p = game.levels(game.x_vars, primed=True)
    yz_levels = game.y_levels + game.levels(ctrl.mem_vars)
    yz_levels_p = [lv + 1 for lv in yz_levels]
    state_levels = ctrl.state_levels

    def key_of(assign, levels):
        return tuple(bool(assign[lv]) for lv in levels)

    states: list[tuple] = []
    index: dict[tuple, int] = {}

    def intern(assign) -> int:
        key = key_of(assign, state_levels)
        if key in index:
            return index[key]
        if len(states) >= max_states:
            raise ConcreteCapExceeded(max_states)
        index[key] = len(states)
        states.append(key)
        return index[key]

    initial = {}
    worklist = []
    for x_assign in m.sat_all(game.theta_e, x_levels):
        restricted = m.restrict(ctrl.init, x_assign)
        choice = m.sat_one(restricted, yz_levels)
        assert choice is not None, "realizable game must cover theta_e"
        full = {**x_assign, **choice}
        sid = intern(full)
        initial[key_of(x_assign, x_levels)] = sid
        worklist.append((sid, full))

    transitions = {}
    seen = set(sid for sid, _ in worklist)
    while worklist:
        sid, assign = worklist.pop()
        env_moves = m.restrict(game.rho_e, assign)
        trans_here = m.restrict(ctrl.trans, assign)
        for xp in m.sat_all(env_moves, x_levels_p):
            choice = m.sat_one(m.restrict(trans_here, xp), yz_levels_p)
            assert choice is not None, \
                "controller must be complete for the environment"
            nxt = {lv - 1: val for lv, val in {**xp, **choice}.items()}
            nid = intern(nxt)
            x_key = tuple(bool(xp[lv]) for lv in x_levels_p)
            transitions[(sid, x_key)] = nid
            if nid not in seen:
                seen.add(nid)
                worklist.append((nid, nxt))

    names = ([name for name, _ in game.x_vars]
             + [name for name, _ in game.y_vars]
             + [name for name, _ in ctrl.mem_vars])
    return ConcreteController(names, len(game.x_vars), states, initial,
                              transitions)
