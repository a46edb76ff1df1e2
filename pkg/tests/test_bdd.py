import itertools
import random

import pytest

from spectra.bdd import BddLimitError, BddManager


@pytest.fixture
def mgr():
    return BddManager()


def test_ite_identity(mgr):
    x = mgr.mk_var(mgr.declare("x"))
    assert mgr.ite(x, mgr.true, mgr.false) == x


def test_contradiction_and_tautology(mgr):
    x = mgr.mk_var(mgr.declare("x"))
    assert (x & ~x).is_false
    assert (x | ~x).is_true


def test_negation_involution_and_de_morgan(mgr):
    x = mgr.mk_var(mgr.declare("x"))
    y = mgr.mk_var(mgr.declare("y"))
    f = (x & y) | (~x & ~y)
    assert ~(~f) == f
    assert ~(x & y) == (~x | ~y)
    assert ~(x | y) == (~x & ~y)


def test_all_sixteen_two_variable_functions_distinct(mgr):
    x = mgr.mk_var(mgr.declare("x"))
    y = mgr.mk_var(mgr.declare("y"))
    minterms = [~x & ~y, ~x & y, x & ~y, x & y]
    functions = []
    for mask in range(16):
        f = mgr.false
        for i in range(4):
            if (mask >> i) & 1:
                f = f | minterms[i]
        functions.append(f)
    assert len({f.node for f in functions}) == 16


def test_quantification(mgr):
    vx, vy = mgr.declare("x"), mgr.declare("y")
    x, y = mgr.mk_var(vx), mgr.mk_var(vy)
    assert mgr.exists([vx], x & y) == y
    assert mgr.forall([vx], x | y) == y
    assert mgr.forall([vx], x & y).is_false


def test_exists_equals_disjunction_of_cofactors(mgr):
    rng = random.Random(5)
    vids = [mgr.declare(f"v{i}") for i in range(4)]
    refs = [mgr.mk_var(v) for v in vids]
    for _ in range(50):
        f = mgr.false
        for _ in range(6):
            term = mgr.true
            for r in refs:
                roll = rng.random()
                if roll < 0.4:
                    term = term & r
                elif roll < 0.8:
                    term = term & ~r
            f = f | term
        quantified = mgr.exists(vids[:3], f)
        expected = mgr.false
        for bits in itertools.product([False, True], repeat=3):
            expected = expected | mgr.restrict(
                f, {mgr.level_of(v): b for v, b in zip(vids[:3], bits)})
        assert quantified == expected


def test_rename_prime_and_back(mgr):
    vx, vy = mgr.declare("x"), mgr.declare("y")
    x, y = mgr.mk_var(vx), mgr.mk_var(vy)
    f = (x & y) | ~x
    primed = mgr.rename_prime(f)
    assert mgr.rename_unprime(primed) == f
    xp, yp = mgr.mk_var(vx, True), mgr.mk_var(vy, True)
    assert mgr.rename_prime(x & y) == (xp & yp)


def test_rename_prime_precondition(mgr):
    vx = mgr.declare("x")
    xp = mgr.mk_var(vx, True)
    with pytest.raises(ValueError):
        mgr.rename_prime(xp)


def test_sat_count_example(mgr):
    vids = [mgr.declare(c) for c in "xyz"]
    x, y = mgr.mk_var(vids[0]), mgr.mk_var(vids[1])
    levels = [mgr.level_of(v) for v in vids]
    assert mgr.sat_count(x | y, levels) == 6


def test_sat_one_deterministic_prefers_low(mgr):
    vids = [mgr.declare(c) for c in "ab"]
    a, b = (mgr.mk_var(v) for v in vids)
    levels = [mgr.level_of(v) for v in vids]
    assert mgr.sat_one(mgr.false, levels) is None
    assert mgr.sat_one(a | b, levels) == {levels[0]: False, levels[1]: True}
    assert mgr.sat_one(mgr.true, levels) == {levels[0]: False,
                                             levels[1]: False}


def test_eval(mgr):
    vx, vy = mgr.declare("x"), mgr.declare("y")
    x, y = mgr.mk_var(vx), mgr.mk_var(vy)
    f = x & ~y
    assert mgr.eval(f, {mgr.level_of(vx): True, mgr.level_of(vy): False})
    assert not mgr.eval(f, {mgr.level_of(vx): True, mgr.level_of(vy): True})


def test_mixing_managers_is_an_error(mgr):
    other = BddManager()
    x = mgr.mk_var(mgr.declare("x"))
    y = other.mk_var(other.declare("y"))
    with pytest.raises(ValueError):
        mgr.apply("and", x, y)


def test_node_limit():
    small = BddManager(max_nodes=16)
    vids = [small.declare(f"v{i}") for i in range(12)]
    with pytest.raises(BddLimitError):
        f = small.true
        for v in vids:
            f = f & (small.mk_var(v) ^ small.mk_var(v, True))


def test_gc_keeps_live_nodes():
    m = BddManager()
    vids = [m.declare(f"v{i}") for i in range(6)]
    keep = m.mk_var(vids[0]) & m.mk_var(vids[1]) | m.mk_var(vids[2])
    for _ in range(200):
        _ = m.mk_var(vids[3]) ^ m.mk_var(vids[4])
    before = m.sat_count(keep, [m.level_of(v) for v in vids])
    m.collect()
    m.audit()
    assert m.sat_count(keep, [m.level_of(v) for v in vids]) == before


# -- randomized truth-table oracle -------------------------------------------


def _random_formula(rng, nvars, depth):
    if depth == 0 or rng.random() < 0.3:
        c = rng.randrange(nvars + 2)
        if c == nvars:
            return ("const", True)
        if c == nvars + 1:
            return ("const", False)
        return ("var", c)
    op = rng.choice(["and", "or", "xor", "imp", "iff", "not"])
    if op == "not":
        return ("not", _random_formula(rng, nvars, depth - 1))
    return (op, _random_formula(rng, nvars, depth - 1),
            _random_formula(rng, nvars, depth - 1))


def _truth_table(tree, env):
    kind = tree[0]
    if kind == "const":
        return tree[1]
    if kind == "var":
        return env[tree[1]]
    if kind == "not":
        return not _truth_table(tree[1], env)
    a = _truth_table(tree[1], env)
    b = _truth_table(tree[2], env)
    return {"and": a and b, "or": a or b, "xor": a != b,
            "imp": (not a) or b, "iff": a == b}[kind]


def _build(mgr, refs, tree):
    kind = tree[0]
    if kind == "const":
        return mgr.true if tree[1] else mgr.false
    if kind == "var":
        return refs[tree[1]]
    if kind == "not":
        return ~_build(mgr, refs, tree[1])
    return mgr.apply(kind, _build(mgr, refs, tree[1]),
                     _build(mgr, refs, tree[2]))


def test_handle_equality_iff_truth_table_equality():
    rng = random.Random(99)
    m = BddManager()
    nvars = 6
    vids = [m.declare(f"v{i}") for i in range(nvars)]
    refs = [m.mk_var(v) for v in vids]
    levels = [m.level_of(v) for v in vids]
    assignments = list(itertools.product([False, True], repeat=nvars))
    for _ in range(500):
        t1 = _random_formula(rng, nvars, 3)
        t2 = _random_formula(rng, nvars, 3)
        b1 = _build(m, refs, t1)
        b2 = _build(m, refs, t2)
        tt1 = tuple(_truth_table(t1, bits) for bits in assignments)
        tt2 = tuple(_truth_table(t2, bits) for bits in assignments)
        assert (b1 == b2) == (tt1 == tt2)
        assert m.sat_count(b1, levels) == sum(tt1)
        env = dict(zip(levels, assignments[rng.randrange(len(assignments))]))
        bit_env = {i: env[levels[i]] for i in range(nvars)}
        assert m.eval(b1, env) == _truth_table(t1, bit_env)
    m.audit()
