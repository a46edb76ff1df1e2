"""Explicit-state reference implementations for differential testing.

Deliberately independent of the BDD engine: expressions are evaluated
directly (scalar recursion for traces, vectorized numpy arrays for
enumerated games). Only usable at desk scale; the game solver enumerates
every assignment and is capped at 12 boolean variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .kernel import KernelSpec
from .syntax import nodes as n

STATE_CAP_BITS = 12


@dataclass(frozen=True)
class Trace:
    """Finite run u0..uk; lasso_back marks the loop target for infinite
    words (states lasso_back..k repeat forever)."""

    states: tuple
    lasso_back: Optional[int] = None

    def __post_init__(self):
        if self.lasso_back is not None:
            assert 0 <= self.lasso_back < len(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


def _states(trace) -> Sequence[dict]:
    return trace.states if isinstance(trace, Trace) else trace


def eval_pastltl(formula: n.Expr, trace, i: int) -> bool:
    """Trace semantics of boolean/past formulas at position i.

    Direct transcription of the defining clauses: Y needs i > 0, S scans
    for a position k <= i where the right operand held with the left
    operand holding on all later positions up to i.
    """
    states = _states(trace)
    assert 0 <= i < len(states)
    e = formula
    if isinstance(e, n.Const):
        return e.value
    if isinstance(e, n.NameRef):
        return bool(states[i][e.name])
    if isinstance(e, n.Unary):
        if e.op == "not":
            return not eval_pastltl(e.operand, trace, i)
        if e.op == "prev":
            return i > 0 and eval_pastltl(e.operand, trace, i - 1)
        if e.op == "once":
            return eval_pastltl(
                n.Binary("since", n.Const(True), e.operand), trace, i)
        if e.op == "historically":
            inner = n.Binary("since", n.Const(True),
                             n.Unary("not", e.operand))
            return not eval_pastltl(inner, trace, i)
        raise ValueError(f"operator {e.op!r} has no past-trace semantics")
    assert isinstance(e, n.Binary)
    if e.op == "since":
        for k in range(i, -1, -1):
            if eval_pastltl(e.right, trace, k):
                if all(eval_pastltl(e.left, trace, j)
                       for j in range(k + 1, i + 1)):
                    return True
        return False
    a = eval_pastltl(e.left, trace, i)
    b = eval_pastltl(e.right, trace, i)
    if e.op == "and":
        return a and b
    if e.op == "or":
        return a or b
    if e.op == "implies":
        return (not a) or b
    if e.op in ("iff", "eq"):
        return a == b
    raise ValueError(f"operator {e.op!r} has no past-trace semantics")


def eval_step(expr: n.Expr, now: dict, nxt: dict | None = None) -> bool:
    """Evaluate a boolean kernel expression on a step (current state and,
    under next, the successor state)."""
    e = expr
    if isinstance(e, n.Const):
        return e.value
    if isinstance(e, n.NameRef):
        return bool(now[e.name])
    if isinstance(e, n.Unary):
        if e.op == "not":
            return not eval_step(e.operand, now, nxt)
        if e.op == "next":
            assert nxt is not None, "next used in a stateless context"
            return eval_step(e.operand, nxt, None)
        raise ValueError(f"operator {e.op!r} is not a kernel operator")
    assert isinstance(e, n.Binary)
    a = eval_step(e.left, now, nxt)
    b = eval_step(e.right, now, nxt)
    if e.op == "and":
        return a and b
    if e.op == "or":
        return a or b
    if e.op == "implies":
        return (not a) or b
    if e.op in ("iff", "eq"):
        return a == b
    raise ValueError(f"operator {e.op!r} is not a kernel operator")


# ---------------------------------------------------------------------------
# explicit GR(1) games


class StateCapExceeded(Exception):
    pass


@dataclass
class ExplicitGame:
    """All assignments enumerated; state index is x-major:
    s = x_index * 2^|Y| + y_index, with each index packing variable bits
    least-significant-first in declaration order."""

    xvars: tuple
    yvars: tuple
    theta_e: np.ndarray  # (Sx,)
    theta_s: np.ndarray  # (S,)
    rho_e: np.ndarray  # (S, Sx)
    rho_s: np.ndarray  # (S, Sx, Sy)
    je: list  # each (S,)
    js: list  # each (S,)

    @property
    def nx(self):
        return len(self.xvars)

    @property
    def ny(self):
        return len(self.yvars)

    def state_assignment(self, s: int) -> dict:
        x, y = divmod(s, 1 << self.ny)
        out = {}
        for i, v in enumerate(self.xvars):
            out[v] = bool((x >> i) & 1)
        for i, v in enumerate(self.yvars):
            out[v] = bool((y >> i) & 1)
        return out


def _leaf_arrays(xvars, yvars):
    """Broadcastable bit patterns over axes (state, x', y')."""
    nx, ny = len(xvars), len(yvars)
    sx, sy = 1 << nx, 1 << ny
    s = sx * sy
    state_idx = np.arange(s)
    x_of_s = state_idx >> ny
    y_of_s = state_idx & (sy - 1)
    arrays = {}
    for i, v in enumerate(xvars):
        arrays[(v, False)] = (((x_of_s >> i) & 1) != 0).reshape(s, 1, 1)
        arrays[(v, True)] = (((np.arange(sx) >> i) & 1) != 0).reshape(1, sx, 1)
    for i, v in enumerate(yvars):
        arrays[(v, False)] = (((y_of_s >> i) & 1) != 0).reshape(s, 1, 1)
        arrays[(v, True)] = (((np.arange(sy) >> i) & 1) != 0).reshape(1, 1, sy)
    return arrays


def _eval_vec(e: n.Expr, arrays, primed=False):
    if isinstance(e, n.Const):
        return np.bool_(e.value)
    if isinstance(e, n.NameRef):
        return arrays[(e.name, primed)]
    if isinstance(e, n.Unary):
        if e.op == "not":
            return ~_eval_vec(e.operand, arrays, primed)
        if e.op == "next":
            assert not primed
            return _eval_vec(e.operand, arrays, True)
        raise ValueError(f"operator {e.op!r} is not a kernel operator")
    assert isinstance(e, n.Binary)
    a = _eval_vec(e.left, arrays, primed)
    b = _eval_vec(e.right, arrays, primed)
    if e.op == "and":
        return a & b
    if e.op == "or":
        return a | b
    if e.op == "implies":
        return ~a | b
    if e.op in ("iff", "eq"):
        return a == b
    raise ValueError(f"operator {e.op!r} is not a kernel operator")


def _full(value, shape):
    return np.broadcast_to(value, shape).copy() if np.ndim(value) != len(
        shape) or np.shape(value) != shape else np.asarray(value)


def explicit_game(kernel: KernelSpec) -> ExplicitGame:
    """Enumerate a kernel specification into an explicit game."""
    xvars = kernel.env_vars
    yvars = kernel.sys_vars
    nbits = len(xvars) + len(yvars)
    if nbits > STATE_CAP_BITS:
        raise StateCapExceeded(
            f"{nbits} boolean variables exceed the explicit-state cap of "
            f"{STATE_CAP_BITS}")
    sx, sy = 1 << len(xvars), 1 << len(yvars)
    s = sx * sy
    arrays = _leaf_arrays(xvars, yvars)

    def over_states(arr):
        return np.broadcast_to(arr, (s, 1, 1))[:, 0, 0].copy()

    theta_e = np.ones(sx, bool)
    theta_s = np.ones(s, bool)
    rho_e = np.ones((s, sx), bool)
    rho_s = np.ones((s, sx, sy), bool)
    je, js = [], []
    for c in kernel.constraints:
        arr = _eval_vec(c.expr, arrays)
        if c.kind == "ini":
            if c.polarity == "asm":
                # mentions only X: collapse the state axis to its x part
                theta_e &= over_states(arr).reshape(sx, sy)[:, 0]
            else:
                theta_s &= over_states(arr)
        elif c.kind == "trans":
            if c.polarity == "asm":
                # mentions no primed Y: drop the y' axis
                rho_e &= np.broadcast_to(arr, (s, sx, sy))[:, :, 0]
            else:
                rho_s &= np.broadcast_to(arr, (s, sx, sy))
        else:
            target = je if c.polarity == "asm" else js
            target.append(over_states(arr))
    return ExplicitGame(xvars, yvars, theta_e, theta_s, rho_e, rho_s, je, js)


def controllable_pre(game: ExplicitGame, v: np.ndarray) -> np.ndarray:
    """States where every rho_e-allowed next input admits a system move
    satisfying rho_s into v."""
    vxy = v.reshape(1 << game.nx, 1 << game.ny)
    can = (game.rho_s & vxy[None, :, :]).any(axis=2)
    return (~game.rho_e | can).all(axis=1)


def winning_region(game: ExplicitGame) -> np.ndarray:
    s = (1 << game.nx) * (1 << game.ny)
    js = game.js or [np.ones(s, bool)]
    je = game.je or [np.ones(s, bool)]
    z = np.ones(s, bool)
    while True:
        changed = False
        for goal in js:
            y = np.zeros(s, bool)
            while True:
                core = (goal & controllable_pre(game, z)) \
                    | controllable_pre(game, y)
                new_y = np.zeros(s, bool)
                for env_goal in je:
                    x = np.ones(s, bool)
                    while True:
                        new_x = core | (~env_goal & controllable_pre(game, x))
                        if (new_x == x).all():
                            break
                        x = new_x
                    new_y |= x
                if (new_y == y).all():
                    break
                y = new_y
            if not (y == z).all():
                changed = True
            z = y
        if not changed:
            return z


def solve_explicit(game: ExplicitGame) -> bool:
    """Strict realizability: for every initial input allowed by theta_e
    the system has an initial state in theta_s that is winning."""
    z = winning_region(game)
    sy = 1 << game.ny
    ok_per_x = (game.theta_s & z).reshape(1 << game.nx, sy).any(axis=1)
    return bool((~game.theta_e | ok_per_x).all())
