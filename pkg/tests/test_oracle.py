import numpy as np
import pytest

from helpers import lower_source
from spectra.oracle import (ExplicitGame, StateCapExceeded, Trace,
                            controllable_pre, eval_pastltl, explicit_game,
                            solve_explicit, winning_region)
from spectra.syntax import parse_expression


TRACE = Trace((
    {"p": False, "q": False},
    {"p": True, "q": False},
    {"p": True, "q": True},
    {"p": True, "q": False},
))


def test_prev_is_false_at_position_zero():
    assert eval_pastltl(parse_expression("Y p"), TRACE, 0) is False
    assert eval_pastltl(parse_expression("Y p"), TRACE, 2) is True


def test_since_holds_when_right_operand_holds_now():
    f = parse_expression("p S q")
    assert eval_pastltl(f, TRACE, 2) is True
    assert eval_pastltl(f, TRACE, 3) is True
    assert eval_pastltl(f, TRACE, 1) is False


def test_once_and_historically_from_definitions():
    once = parse_expression("O q")
    hist = parse_expression("H p")
    assert [eval_pastltl(once, TRACE, i) for i in range(4)] == \
        [False, False, True, True]
    assert [eval_pastltl(hist, TRACE, i) for i in range(4)] == \
        [False] * 4
    # H p where p holds everywhere
    allp = Trace(tuple({"p": True} for _ in range(3)))
    assert all(eval_pastltl(parse_expression("H p"), allp, i)
               for i in range(3))


def test_since_brute_force_against_definition():
    import random
    rng = random.Random(3)
    f = parse_expression("p S q")
    for _ in range(100):
        tr = [{"p": rng.random() < .5, "q": rng.random() < .5}
              for _ in range(8)]
        for i in range(8):
            want = any(tr[k]["q"] and all(tr[j]["p"]
                                          for j in range(k + 1, i + 1))
                       for k in range(i + 1))
            assert eval_pastltl(f, tr, i) == want


def _game(src):
    return explicit_game(lower_source(src).kernel)


def test_hand_analyzed_games():
    assert solve_explicit(_game(
        "spec A env boolean x; sys boolean y; gar alw (y <-> x);")) is True
    assert solve_explicit(_game(
        "spec B env boolean x; sys boolean y;"
        "gar trans (y <-> next(x));")) is False
    assert solve_explicit(_game(
        "spec C env boolean x; sys boolean y; asm alwEv x;"
        "gar alwEv (x & y);")) is True
    assert solve_explicit(_game(
        "spec D env boolean x; sys boolean y;"
        "gar alwEv (x & y);")) is False


def test_theta_s_false_is_unrealizable():
    assert solve_explicit(_game(
        "spec S env boolean x; sys boolean y; gar ini (y & !y);")) is False


def test_theta_e_false_is_vacuously_realizable():
    assert solve_explicit(_game(
        "spec S env boolean x; sys boolean y; asm ini (x & !x);"
        "gar ini (y & !y);")) is True


def test_controllable_pre_definition():
    g = _game("spec S env boolean x; sys boolean y; gar alw (y <-> x);")
    all_states = np.ones(4, bool)
    pre_true = controllable_pre(g, all_states)
    # with rho_s = (y' <-> x') the system always has a reply
    assert pre_true.all()
    pre_false = controllable_pre(g, np.zeros(4, bool))
    assert not pre_false.any()


def test_state_cap_enforced():
    src = "spec Big " + " ".join(
        f"env boolean x{i};" for i in range(8)) + " ".join(
        f"sys boolean y{i};" for i in range(5)) + " gar ini y0;"
    with pytest.raises(StateCapExceeded):
        _game(src)


def test_winning_region_of_mirror_game():
    g = _game("spec S env boolean x; sys boolean y; gar alw (y <-> x);")
    z = winning_region(g)
    assert z.all()
