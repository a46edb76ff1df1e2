import itertools

import pytest

from helpers import check_source, lower_source
from spectra.analyses import (RealizableError, _subset_kernel, check_monitor,
                              find_trivial, unrealizable_core)
from spectra.game import to_gr1
from spectra.gr1 import solve
from spectra.lowering import lower


def verify_core_exhaustively(low, core_keys):
    """Check 1-minimality of a reported core with an exhaustive subset
    enumeration (feasible for <= 6 guarantees)."""
    keys = sorted({c.origin.key for c in low.kernel.constraints
                   if c.origin is not None
                   and c.origin.category == "guarantee"})
    assert len(keys) <= 6
    realizability = {}
    for r in range(len(keys) + 1):
        for subset in itertools.combinations(keys, r):
            ok, _ = solve(to_gr1(_subset_kernel(low.kernel,
                                                frozenset(subset))))
            realizability[frozenset(subset)] = ok
    assert not realizability[frozenset(core_keys)]
    for key in core_keys:
        assert realizability[frozenset(core_keys) - {key}]


UNREALIZABLE_SPECS = [
    # contradictory initial guarantees
    ("""spec U1 env boolean x; sys boolean y;
gar g1: ini y;
gar g2: ini !y;
gar g3: alwEv y;""", {"g1", "g2"}),
    # a single self-contradictory guarantee among healthy ones
    ("""spec U2 env boolean x; sys boolean y;
gar good: alw (y <-> x);
gar bad: alw false;""", {"bad"}),
    # three guarantees unrealizable only jointly
    ("""spec U3 env boolean x; sys boolean y1; sys boolean y2;
gar a: alw (y1 | y2);
gar b: alw !y1;
gar c: alw !y2;""", {"a", "b", "c"}),
    # prediction of the next input, plus a decoy
    ("""spec U4 env boolean x; sys boolean y; sys boolean z;
gar seer: trans (y <-> next(x));
gar decoy: alw (z -> z);""", {"seer"}),
    # justice without the helping assumption
    ("""spec U5 env boolean x; sys boolean y;
gar goal: alwEv (x & y);
gar tidy: ini !y;""", {"goal"}),
    # enum-typed contradiction
    ("""spec U6 env boolean x;
type M = {A, B, C};
sys M v;
gar pickA: ini (v = A);
gar pickB: ini (v = B);""", {"pickA", "pickB"}),
]


@pytest.mark.parametrize("src,expected", UNREALIZABLE_SPECS)
def test_unrealizable_cores(src, expected):
    checked = check_source(src)
    low = lower(checked)
    report = unrealizable_core(low)
    labels = {g.label for g in report.core}
    assert labels == expected
    assert report.minimal
    assert report.checks_performed > 0
    verify_core_exhaustively(low, {g.key for g in report.core})


def test_core_on_realizable_spec_raises():
    with pytest.raises(RealizableError):
        unrealizable_core(check_source(
            "spec R env boolean x; sys boolean y; gar alw (y <-> x);"))


def test_core_deterministic():
    checked = check_source(UNREALIZABLE_SPECS[0][0])
    first = unrealizable_core(checked)
    second = unrealizable_core(checked)
    assert [g.key for g in first.core] == [g.key for g in second.core]


def test_core_keeps_assumptions():
    # unrealizable only because of g; the assumption must stay in play
    src = """spec A env boolean x; sys boolean y;
asm calm: alw !x;
gar g: alwEv (x & y);
gar h: alw (y | !y | x);"""
    report = unrealizable_core(check_source(src))
    assert {g.label for g in report.core} == {"g"}


# -- trivial constraints ----------------------------------------------------


def test_find_trivial_examples():
    findings = find_trivial(check_source("""spec T
env boolean x; sys boolean y;
gar t1: alw (x | !x);
asm t2: ini (x & !x);
gar t3: trans (next(y) <-> x);"""))
    got = {(f.label, f.verdict) for f in findings}
    assert got == {("t1", "triviallyTrue"), ("t2", "triviallyFalse")}


def test_find_trivial_int_tautology():
    findings = find_trivial(check_source("""spec T
env Int(0..7) k; sys boolean y;
gar bound: alw (k <= 7);
gar real: alw (y <-> k = 3);"""))
    assert {(f.label, f.verdict) for f in findings} == \
        {("bound", "triviallyTrue")}


def test_find_trivial_ignores_past_definitions():
    findings = find_trivial(check_source("""spec T
env boolean p; sys boolean q;
gar taut: alw ((O p) | !(O p));
gar real: alw (q <-> O p);"""))
    assert {(f.label, f.verdict) for f in findings} == \
        {("taut", "triviallyTrue")}


# -- monitor checks -----------------------------------------------------------


MONITORS = """spec M
env boolean x; sys boolean y;
monitor boolean good {
  ini !good;
  trans (next(good) <-> x);
}
monitor boolean undefinedInit {
  trans (next(undefinedInit) <-> x);
}
monitor boolean forcesInput {
  ini !forcesInput;
  trans (next(forcesInput) & next(x));
}
monitor boolean contradictory {
  ini contradictory;
  trans (next(contradictory) & !next(contradictory));
}
gar g: alw (y | !y | good | undefinedInit | forcesInput | contradictory);
"""


def test_monitor_good_is_deterministic_and_complete():
    verdict = check_monitor(check_source(MONITORS), "good")
    assert verdict.deterministic and verdict.complete
    assert verdict.witness is None


def test_monitor_missing_init_is_nondeterministic():
    verdict = check_monitor(check_source(MONITORS), "undefinedInit")
    assert not verdict.deterministic
    assert verdict.witness is not None


def test_monitor_restricting_other_variable_is_incomplete():
    verdict = check_monitor(check_source(MONITORS), "forcesInput")
    assert not verdict.complete
    assert verdict.witness is not None


def test_monitor_contradictory_step_is_incomplete():
    verdict = check_monitor(check_source(MONITORS), "contradictory")
    assert not verdict.complete


def test_monitor_unknown_name():
    with pytest.raises(KeyError):
        check_monitor(check_source(MONITORS), "nope")


def test_monitor_verdicts_agree_with_enumeration():
    """Exhaustive reimplementation of the determinism/completeness
    conditions for boolean monitors over one input bit."""
    src = check_source(MONITORS)
    for name in ("good", "undefinedInit", "forcesInput", "contradictory"):
        verdict = check_monitor(src, name)
        monitor = [e for e in src.ast.elements
                   if getattr(e, "name", None) == name][0]
        from spectra.oracle import eval_step

        ini = [c.expr for c in monitor.constraints if c.kind == "ini"]
        trans = [c.expr for c in monitor.constraints if c.kind == "trans"]
        other_now = [{"x": b} for b in (False, True)]

        def others(base):
            # the other monitors are unconstrained sys bits here; they do
            # not appear in this monitor's constraints, so ignore them
            return base

        det = True
        comp = True
        for env0 in other_now:
            vals = [mv for mv in (False, True)
                    if all(eval_step(e, {**env0, name: mv}) for e in ini)]
            det &= len(vals) <= 1
            comp &= len(vals) >= 1
        for env0 in other_now:
            for mv in (False, True):
                now = {**env0, name: mv}
                for env1 in other_now:
                    vals = [nv for nv in (False, True)
                            if all(eval_step(e, now, {**env1, name: nv})
                                   for e in trans)]
                    det &= len(vals) <= 1
                    comp &= len(vals) >= 1
        assert verdict.deterministic == det, name
        assert verdict.complete == comp, name


def test_monitor_with_enum_type():
    src = check_source("""spec ME
env boolean tick; sys boolean out;
type Phase = {IDLE, BUSY};
monitor Phase phase {
  ini (phase = IDLE);
  trans (next(phase) = BUSY <-> next(tick));
}
gar g: alw (out <-> phase = BUSY);""")
    verdict = check_monitor(src, "phase")
    assert verdict.deterministic and verdict.complete


def test_monitor_with_past_operator():
    src = check_source("""spec MP
env boolean x; sys boolean y;
monitor boolean seen {
  ini (seen <-> x);
  trans (next(seen) <-> (O x));
}
gar g: alw (y | seen | !seen);""")
    verdict = check_monitor(src, "seen")
    assert verdict.deterministic and verdict.complete
