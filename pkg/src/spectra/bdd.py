"""Reduced ordered binary decision diagrams.

A from-scratch ROBDD engine with a unique table, memoized apply/ite,
quantification, and prime/unprime renaming. Variables are declared in
pairs: each variable occupies level 2*k and its primed twin level 2*k+1,
so renaming between current and next state is a constant level shift.

No complement edges and no dynamic reordering; canonicity means handle
equality coincides with functional equivalence within one manager.
"""

from __future__ import annotations

import os

TERMINAL_LEVEL = 1 << 30


class BddLimitError(Exception):
    """Unique table exceeded the configured node cap."""

    def __init__(self, limit, message=None):
        self.limit = limit
        super().__init__(message or f"BDD node limit of {limit} exceeded")


class BddRef:
    """Handle to a node, valid only within its manager.

    Handles compare equal iff they denote the same function (canonicity).
    Boolean structure can be built with &, |, ^, ~ and the iff/implies
    methods.
    """

    __slots__ = ("manager", "node", "__weakref__")

    def __init__(self, manager: "BddManager", node: int):
        self.manager = manager
        self.node = node
        manager._incref(node)

    def __del__(self):
        try:
            self.manager._decref(self.node)
        except Exception:
            pass

    def __eq__(self, other):
        return (isinstance(other, BddRef) and other.manager is self.manager
                and other.node == self.node)

    def __hash__(self):
        return hash((id(self.manager), self.node))

    def __repr__(self):
        return f"BddRef({self.node})"

    def __and__(self, other):
        return self.manager.apply("and", self, other)

    def __or__(self, other):
        return self.manager.apply("or", self, other)

    def __xor__(self, other):
        return self.manager.apply("xor", self, other)

    def __invert__(self):
        return self.manager.negate(self)

    def implies(self, other):
        return self.manager.apply("imp", self, other)

    def iff(self, other):
        return self.manager.apply("iff", self, other)

    @property
    def is_true(self):
        return self.node == 1

    @property
    def is_false(self):
        return self.node == 0


class BddManager:
    """Owner of the unique table; single-threaded by design."""

    def __init__(self, max_nodes: int | None = None):
        if max_nodes is None:
            max_nodes = int(os.environ.get("SPECTRA_BDD_NODES", "1000000"))
        self.max_nodes = max_nodes
        # node id -> (level, low, high); 0 and 1 are the terminals
        self._nodes: dict[int, tuple[int, int, int]] = {
            0: (TERMINAL_LEVEL, 0, 0),
            1: (TERMINAL_LEVEL, 1, 1),
        }
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}
        self._next_id = 2
        self._refcount: dict[int, int] = {}
        self._var_names: list[str] = []
        self._gc_at = max(10000, max_nodes // 4)
        self.false = BddRef(self, 0)
        self.true = BddRef(self, 1)

    # -- reference counting / gc --------------------------------------------

    def _incref(self, node):
        self._refcount[node] = self._refcount.get(node, 0) + 1

    def _decref(self, node):
        c = self._refcount.get(node, 0) - 1
        if c <= 0:
            self._refcount.pop(node, None)
        else:
            self._refcount[node] = c

    def collect(self):
        """Mark-and-sweep of nodes unreachable from live handles."""
        live = set()
        stack = [nd for nd in self._refcount] + [0, 1]
        while stack:
            nd = stack.pop()
            if nd in live:
                continue
            live.add(nd)
            level, lo, hi = self._nodes[nd]
            if level != TERMINAL_LEVEL:
                stack.append(lo)
                stack.append(hi)
        self._nodes = {nd: rec for nd, rec in self._nodes.items() if nd in live}
        self._unique = {key: nd for key, nd in self._unique.items()
                        if nd in live}
        self._cache.clear()
        self._gc_at = max(self._gc_at, 2 * len(self._nodes))

    def _maybe_collect(self):
        if len(self._nodes) >= self._gc_at:
            self.collect()

    # -- variables ------------------------------------------------------------

    def declare(self, name: str) -> int:
        """Declare a variable (and its primed twin); returns the var id."""
        self._var_names.append(name)
        return len(self._var_names) - 1

    @property
    def var_names(self):
        return tuple(self._var_names)

    def level_of(self, var: int, primed: bool = False) -> int:
        return 2 * var + (1 if primed else 0)

    def var_at_level(self, level: int) -> tuple[int, bool]:
        return level // 2, bool(level % 2)

    def mk_var(self, var: int, primed: bool = False) -> BddRef:
        assert 0 <= var < len(self._var_names)
        return BddRef(self, self._mk(self.level_of(var, primed), 0, 1))

    # -- node construction ------------------------------------------------------

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        found = self._unique.get(key)
        if found is not None:
            return found
        if len(self._nodes) >= self.max_nodes:
            raise BddLimitError(self.max_nodes)
        nd = self._next_id
        self._next_id += 1
        self._nodes[nd] = key
        self._unique[key] = nd
        return nd

    def _ref(self, node: int) -> BddRef:
        return BddRef(self, node)

    # -- core operations ---------------------------------------------------------

    _APPLY_TERMINAL = {
        "and": {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1},
        "or": {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1},
        "xor": {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0},
        "imp": {(0, 0): 1, (0, 1): 1, (1, 0): 0, (1, 1): 1},
        "iff": {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1},
    }

    def apply(self, op: str, a: BddRef, b: BddRef) -> BddRef:
        if a.manager is not self or b.manager is not self:
            raise ValueError("operands belong to a different manager")
        self._maybe_collect()
        return self._ref(self._apply(op, a.node, b.node))

    def _apply(self, op, a, b):
        # terminal short-cuts
        if op == "and":
            if a == 0 or b == 0:
                return 0
            if a == 1:
                return b
            if b == 1:
                return a
            if a == b:
                return a
        elif op == "or":
            if a == 1 or b == 1:
                return 1
            if a == 0:
                return b
            if b == 0:
                return a
            if a == b:
                return a
        elif op == "xor":
            if a == 0:
                return b
            if b == 0:
                return a
            if a == b:
                return 0
        elif op == "imp":
            if a == 0 or b == 1:
                return 1
            if a == 1:
                return b
            if a == b:
                return 1
        elif op == "iff":
            if a == 1:
                return b
            if b == 1:
                return a
            if a == b:
                return 1
            if a == 0:
                return self._negate(b)
            if b == 0:
                return self._negate(a)
        else:
            raise ValueError(f"unknown operator {op!r}")
        if a <= 1 and b <= 1:
            return self._APPLY_TERMINAL[op][(a, b)]
        if op in ("and", "or", "xor", "iff") and b < a:
            a, b = b, a  # commutative: normalize the cache key
        key = (op, a, b)
        found = self._cache.get(key)
        if found is not None:
            return found
        la, lo_a, hi_a = self._nodes[a]
        lb, lo_b, hi_b = self._nodes[b]
        level = min(la, lb)
        a0, a1 = (lo_a, hi_a) if la == level else (a, a)
        b0, b1 = (lo_b, hi_b) if lb == level else (b, b)
        res = self._mk(level, self._apply(op, a0, b0), self._apply(op, a1, b1))
        self._cache[key] = res
        return res

    def negate(self, a: BddRef) -> BddRef:
        self._maybe_collect()
        return self._ref(self._negate(a.node))

    def _negate(self, a):
        if a <= 1:
            return 1 - a
        key = ("not", a)
        found = self._cache.get(key)
        if found is not None:
            return found
        level, lo, hi = self._nodes[a]
        res = self._mk(level, self._negate(lo), self._negate(hi))
        self._cache[key] = res
        return res

    def ite(self, f: BddRef, g: BddRef, h: BddRef) -> BddRef:
        self._maybe_collect()
        return self._ref(self._ite(f.node, g.node, h.node))

    def _ite(self, f, g, h):
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        if g == 0 and h == 1:
            return self._negate(f)
        key = ("ite", f, g, h)
        found = self._cache.get(key)
        if found is not None:
            return found
        level = min(self._nodes[x][0] for x in (f, g, h))

        def cof(x, which):
            lx, lo, hi = self._nodes[x]
            if lx != level:
                return x
            return hi if which else lo

        res = self._mk(level,
                       self._ite(cof(f, 0), cof(g, 0), cof(h, 0)),
                       self._ite(cof(f, 1), cof(g, 1), cof(h, 1)))
        self._cache[key] = res
        return res

    # -- quantification -----------------------------------------------------------

    def _levels_of(self, vars, primed):
        return frozenset(self.level_of(v, primed) for v in vars)

    def exists(self, vars, f: BddRef, primed: bool = False) -> BddRef:
        """Existential quantification over var ids (primed selects twins)."""
        self._maybe_collect()
        return self._ref(self._exists(self._levels_of(vars, primed), f.node))

    def exists_levels(self, levels, f: BddRef) -> BddRef:
        self._maybe_collect()
        return self._ref(self._exists(frozenset(levels), f.node))

    def _exists(self, levels, f):
        if f <= 1 or not levels:
            return f
        level, lo, hi = self._nodes[f]
        relevant = frozenset(l for l in levels if l >= level)
        if not relevant:
            return f
        key = ("ex", relevant, f)
        found = self._cache.get(key)
        if found is not None:
            return found
        if level in relevant:
            res = self._apply("or", self._exists(relevant, lo),
                              self._exists(relevant, hi))
        else:
            res = self._mk(level, self._exists(relevant, lo),
                           self._exists(relevant, hi))
        self._cache[key] = res
        return res

    def forall(self, vars, f: BddRef, primed: bool = False) -> BddRef:
        return ~self.exists(vars, ~f, primed)

    def forall_levels(self, levels, f: BddRef) -> BddRef:
        return ~self.exists_levels(levels, ~f)

    # -- renaming -------------------------------------------------------------------

    def rename_prime(self, f: BddRef) -> BddRef:
        """Substitute every unprimed variable by its primed twin."""
        self._maybe_collect()
        return self._ref(self._shift(f.node, +1))

    def rename_unprime(self, f: BddRef) -> BddRef:
        self._maybe_collect()
        return self._ref(self._shift(f.node, -1))

    def _shift(self, f, delta):
        if f <= 1:
            return f
        key = ("shift", delta, f)
        found = self._cache.get(key)
        if found is not None:
            return found
        level, lo, hi = self._nodes[f]
        if delta > 0 and level % 2 != 0:
            raise ValueError("rename_prime: input mentions primed variables")
        if delta < 0 and level % 2 != 1:
            raise ValueError("rename_unprime: input mentions unprimed "
                             "variables")
        res = self._mk(level + delta, self._shift(lo, delta),
                       self._shift(hi, delta))
        self._cache[key] = res
        return res

    def rename(self, f: BddRef, mapping: dict[int, int]) -> BddRef:
        """General substitution level -> level (pairwise distinct targets);
        rebuilt with ite so any order change stays canonical."""
        self._maybe_collect()
        memo: dict[int, int] = {}

        def rec(nd):
            if nd <= 1:
                return nd
            if nd in memo:
                return memo[nd]
            level, lo, hi = self._nodes[nd]
            target = mapping.get(level, level)
            var = self._mk(target, 0, 1)
            res = self._ite(var, rec(hi), rec(lo))
            memo[nd] = res
            return res

        return self._ref(rec(f.node))

    # -- restriction and evaluation ------------------------------------------------

    def restrict(self, f: BddRef, assignment: dict[int, bool]) -> BddRef:
        """Cofactor by a partial assignment of levels to values."""
        self._maybe_collect()
        memo: dict[int, int] = {}

        def rec(nd):
            if nd <= 1:
                return nd
            if nd in memo:
                return memo[nd]
            level, lo, hi = self._nodes[nd]
            if level in assignment:
                res = rec(hi if assignment[level] else lo)
            else:
                res = self._mk(level, rec(lo), rec(hi))
            memo[nd] = res
            return res

        return self._ref(rec(f.node))

    def eval(self, f: BddRef, assignment: dict[int, bool]) -> bool:
        """Evaluate under a total assignment of the support levels."""
        nd = f.node
        while nd > 1:
            level, lo, hi = self._nodes[nd]
            nd = hi if assignment[level] else lo
        return nd == 1

    def support_levels(self, f: BddRef) -> set[int]:
        seen = set()
        levels = set()
        stack = [f.node]
        while stack:
            nd = stack.pop()
            if nd <= 1 or nd in seen:
                continue
            seen.add(nd)
            level, lo, hi = self._nodes[nd]
            levels.add(level)
            stack.append(lo)
            stack.append(hi)
        return levels

    def size(self, f: BddRef) -> int:
        seen = set()
        stack = [f.node]
        while stack:
            nd = stack.pop()
            if nd <= 1 or nd in seen:
                continue
            seen.add(nd)
            _, lo, hi = self._nodes[nd]
            stack.append(lo)
            stack.append(hi)
        return len(seen) + 2

    # -- satisfying assignments ---------------------------------------------------

    def sat_one(self, f: BddRef, levels) -> dict[int, bool] | None:
        """Deterministic satisfying assignment over exactly `levels`;
        the lowest level takes 0 whenever both branches are satisfiable."""
        if f.node == 0:
            return None
        levels = sorted(levels)
        support = self.support_levels(f)
        assert support <= set(levels), "sat_one: levels must cover support"
        out = {}
        nd = f.node
        for level in levels:
            nlevel, lo, hi = self._nodes[nd] if nd > 1 else (TERMINAL_LEVEL,
                                                             nd, nd)
            if nd <= 1 or nlevel != level:
                out[level] = False
                continue
            if lo != 0:
                out[level] = False
                nd = lo
            else:
                out[level] = True
                nd = hi
        assert nd == 1
        return out

    def sat_count(self, f: BddRef, levels) -> int:
        """Number of satisfying assignments over exactly `levels`."""
        levels = sorted(levels)
        index = {lv: i for i, lv in enumerate(levels)}
        n = len(levels)
        support = self.support_levels(f)
        assert support <= set(levels), "sat_count: levels must cover support"
        memo: dict[int, int] = {}

        def level_index(nd):
            return n if nd <= 1 else index[self._nodes[nd][0]]

        def rec(nd):
            """Count over the levels at and below this node's own level."""
            if nd == 0:
                return 0
            if nd == 1:
                return 1
            if nd in memo:
                return memo[nd]
            level, lo, hi = self._nodes[nd]
            i = index[level]
            res = (rec(lo) << (level_index(lo) - i - 1)) \
                + (rec(hi) << (level_index(hi) - i - 1))
            memo[nd] = res
            return res

        if f.node == 0:
            return 0
        return rec(f.node) << level_index(f.node)

    def sat_all(self, f: BddRef, levels):
        """Iterate all satisfying assignments over `levels`, in the
        deterministic low-first order."""
        levels = sorted(levels)
        support = self.support_levels(f)
        assert support <= set(levels), "sat_all: levels must cover support"

        def rec(nd, i):
            if i == len(levels):
                if nd == 1:
                    yield {}
                return
            level = levels[i]
            nlevel, lo, hi = self._nodes[nd] if nd > 1 else (TERMINAL_LEVEL,
                                                             nd, nd)
            if nd == 0:
                return
            if nd <= 1 or nlevel != level:
                for rest in rec(nd, i + 1):
                    yield {level: False, **rest}
                    yield {level: True, **rest}
            else:
                for rest in rec(lo, i + 1):
                    yield {level: False, **rest}
                for rest in rec(hi, i + 1):
                    yield {level: True, **rest}

        yield from rec(f.node, 0)

    # -- diagnostics ------------------------------------------------------------------

    def audit(self):
        """Canonicity audit: no redundant nodes, no duplicate entries."""
        for nd, (level, lo, hi) in self._nodes.items():
            if nd <= 1:
                continue
            assert lo != hi, f"redundant node {nd}"
            assert self._unique.get((level, lo, hi)) == nd, \
                f"unique table out of sync for {nd}"
            assert self._nodes[lo][0] > level and self._nodes[hi][0] > level, \
                f"ordering violated at {nd}"
        assert len(self._unique) == len(self._nodes) - 2

    def __len__(self):
        return len(self._nodes)
