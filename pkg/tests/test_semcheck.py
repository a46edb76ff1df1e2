import pytest

from helpers import check_source, corpus_paths, load_checked
from spectra.diagnostics import DiagnosticsError, SourceCatalog
from spectra.semcheck import check, resolve_imports
from spectra.syntax import parse
from spectra.syntax import nodes as n


def errors_of(src):
    with pytest.raises(DiagnosticsError) as exc:
        check_source(src)
    return [d.message for d in exc.value.diagnostics]


def test_initial_assumption_rejects_system_variable():
    msgs = errors_of("spec S env boolean x; sys boolean y; asm ini y;")
    assert any("initial assumption references a system variable" in m
               for m in msgs)


def test_initial_assumption_rejects_monitor():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
monitor boolean m { ini !m; trans (next(m) <-> x); }
asm ini m;""")
    assert any("initial assumption" in m for m in msgs)


def test_nested_next_rejected():
    msgs = errors_of("spec S env boolean x; sys boolean y;"
                     "gar trans next(next(x));")
    assert any("nested" in m for m in msgs)


def test_nested_next_through_define_rejected():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
define peek := next(x);
gar trans next(peek);""")
    assert any("nested inside 'next'" in m for m in msgs)


def test_define_with_next_rejected_in_ini():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
define peek := next(x);
gar ini peek;""")
    assert any("'ini'" in m for m in msgs)


def test_next_rejected_in_justice():
    msgs = errors_of("spec S env boolean x; sys boolean y;"
                     "gar alwEv next(x);")
    assert any("alwEv" in m for m in msgs)


def test_safety_assumption_rejects_sys_under_next():
    msgs = errors_of("spec S env boolean x; sys boolean y;"
                     "asm trans next(y);")
    assert any("nests a system variable" in m for m in msgs)


def test_safety_assumption_allows_sys_outside_next():
    check_source("spec S env boolean x; sys boolean y;"
                 "asm trans (y -> next(x));")


def test_alw_assumption_rejects_sys():
    msgs = errors_of("spec S env boolean x; sys boolean y; asm alw y;")
    assert any("state-invariant assumption" in m for m in msgs)


def test_pattern_requires_exactly_one_justice():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
pattern p2(a) { var boolean r; alwEv r; alwEv a; }
gar alwEv p2(x);""")
    assert any("exactly one justice" in m for m in msgs)


def test_pattern_safety_only_pattern_vars_under_next():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
pattern bad(a) { var boolean r; alwEv r; trans (next(r) <-> next(a)); }
gar alwEv bad(x);""")
    assert any("only pattern variables" in m for m in msgs)


def test_pattern_instance_must_be_whole_expression():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
pattern p(a) { var boolean r; alwEv r; }
gar alwEv (x & p(x));""")
    assert any("entire expression" in m for m in msgs)


def test_monitor_rejects_justice_constraint():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
monitor boolean m { ini !m; alwEv m; }""")
    assert any("justice" in m for m in msgs)


def test_monitor_rejects_next_in_ini():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
monitor boolean m { ini next(x); trans (next(m) <-> x); }""")
    assert any("'ini'" in m for m in msgs)


def test_enum_ordering_comparison_rejected():
    msgs = errors_of("""spec S
type M = {A, B, C};
sys M v; env boolean x;
gar ini (v < B);""")
    assert any("equality is the only comparison" in m.lower() for m in msgs)


def test_enum_vs_int_comparison_rejected():
    msgs = errors_of("""spec S
type M = {A, B};
sys M v; env boolean x;
gar ini (v = 3);""")
    assert any("cannot compare" in m for m in msgs)


def test_int_range_requires_upper_above_lower():
    msgs = errors_of("spec S sys Int(5..5) v; env boolean x; gar ini true;")
    assert any("upper bound must exceed" in m for m in msgs)


def test_enum_typing_through_typedef():
    checked = check_source("""spec S
type MotorCmd = {FWD, STOP, BWD};
sys MotorCmd v; env boolean x;
gar pick: ini (v = FWD);""")
    gar = checked.ast.elements[-1]
    assert checked.type_of(gar.constraint.expr) == ("bool",)


def test_interval_arithmetic():
    src = "spec S env Int(0..50) speed; asm bound: alw (speed + 1 <= 51);"
    checked = check_source(src)
    asm = checked.ast.elements[-1]
    add_node = asm.constraint.expr.left
    assert checked.type_of(add_node) == ("int", 1, 51)


def test_mixed_type_arithmetic_rejected():
    msgs = errors_of("spec S env boolean x; sys Int(0..3) v;"
                     "gar ini (v + x = 2);")
    assert any("integer operands" in m for m in msgs)


def test_duplicate_names_rejected():
    msgs = errors_of("spec S env boolean x; sys boolean x; gar ini true;")
    assert any("already declared" in m for m in msgs)


def test_assumption_names_share_namespace():
    msgs = errors_of("spec S env boolean x; sys boolean y;"
                     "asm x: ini true;")
    assert any("already declared" in m for m in msgs)


def test_named_guarantee_not_referenceable():
    msgs = errors_of("spec S env boolean x; sys boolean y;"
                     "gar named: ini y; gar other: ini named;")
    assert any("cannot be referenced" in m for m in msgs)


def test_recursive_predicate_rejected():
    msgs = errors_of("""spec S env boolean x; sys boolean y;
predicate rec(boolean a) { a | rec(a) }
gar ini rec(x);""")
    assert any("recursive" in m for m in msgs)


def test_predicate_arity_and_types_checked():
    msgs = errors_of("""spec S env boolean x; sys Int(0..3) v;
predicate p(boolean a) { a }
gar g1: ini p(x, x);
gar g2: ini p(v);""")
    assert any("expects 1 argument" in m for m in msgs)
    assert any("expects boolean" in m for m in msgs)


def test_division_requires_constant_nonzero_divisor():
    msgs = errors_of("spec S env Int(0..9) k; sys Int(0..9) j;"
                     "gar ini (k / j = 1);")
    assert any("constant integer divisor" in m for m in msgs)
    msgs = errors_of("spec S env Int(0..9) k; sys boolean y;"
                     "gar ini (k / 0 = 1);")
    assert any("division by zero" in m for m in msgs)


def test_past_operator_operand_must_be_boolean():
    msgs = errors_of("spec S env Int(0..3) k; sys boolean y;"
                     "gar ini (Y k);")
    assert any("must be boolean" in m for m in msgs)


def test_past_rejected_in_initial_assumption():
    msgs = errors_of("spec S env boolean x; sys boolean y; asm ini (O x);")
    assert any("past operator" in m for m in msgs)


def test_past_allowed_in_safety_assumption_outside_next():
    check_source("spec S env boolean x; sys boolean y;"
                 "asm trans ((O x) -> next(x));")


def test_check_idempotent():
    src = "spec S env boolean x; sys boolean y; asm ini y; gar alw next(y);"
    first = errors_of(src)
    second = errors_of(src)
    assert first == second


def test_checked_corpus():
    for path in corpus_paths():
        load_checked(path)


# -- imports ----------------------------------------------------------------


def _loader(files):
    def load(path):
        key = path.replace("\\", "/")
        if key not in files:
            raise FileNotFoundError(path)
        return files[key]
    return load


def test_import_copies_referenced_only():
    files = {
        "main.spectra": 'import "lib.spectra";\nspec M env boolean r;'
                        ' sys boolean s;\nasm alwEv pUsed(r);\n'
                        'gar g: alw (s <-> r);\n',
        "lib.spectra": """spec L
pattern pUsed(a) { var boolean v; ini (v <-> a); alwEv v;
  trans (next(v) <-> a); }
pattern pUnused(a) { var boolean u; ini u; alwEv u; }
""",
    }
    ast = resolve_imports("main.spectra", loader=_loader(files))
    assert not ast.imports
    names = [e.name for e in ast.elements if isinstance(e, n.Pattern)]
    assert names == ["pUsed"]
    check(ast)


def test_import_without_imports_is_identity():
    files = {"solo.spectra": "spec A sys boolean x; gar ini x;"}
    ast = resolve_imports("solo.spectra", loader=_loader(files))
    assert ast == parse(files["solo.spectra"], "solo.spectra")


def test_import_cycle_detected():
    files = {
        "a.spectra": 'import "b.spectra";\nspec A sys boolean x; gar ini x;',
        "b.spectra": 'import "a.spectra";\nspec B sys boolean y; gar ini y;',
    }
    with pytest.raises(DiagnosticsError) as exc:
        resolve_imports("a.spectra", loader=_loader(files))
    assert "cycle" in exc.value.diagnostics[0].message


def test_import_missing_file():
    files = {"a.spectra": 'import "nope.spectra";\nspec A sys boolean x;'
                          ' gar ini x;'}
    with pytest.raises(DiagnosticsError) as exc:
        resolve_imports("a.spectra", loader=_loader(files))
    assert "cannot read import" in exc.value.diagnostics[0].message


def test_import_duplicate_definitions_rejected():
    files = {
        "a.spectra": 'import "b.spectra";\nimport "c.spectra";\n'
                     'spec A env boolean x; sys boolean y;'
                     ' gar ini p(x);\n',
        "b.spectra": "spec B predicate p(boolean a) { a }",
        "c.spectra": "spec C predicate p(boolean a) { !a }",
    }
    with pytest.raises(DiagnosticsError) as exc:
        resolve_imports("a.spectra", loader=_loader(files))
    assert "more than one" in exc.value.diagnostics[0].message


def test_imported_predicate_must_be_self_contained():
    files = {
        "a.spectra": 'import "b.spectra";\nspec A env boolean x;'
                     ' sys boolean y; gar ini leaky(x);\n',
        "b.spectra": "spec B env boolean foreign;"
                     " predicate leaky(boolean a) { a & foreign }",
    }
    with pytest.raises(DiagnosticsError) as exc:
        resolve_imports("a.spectra", loader=_loader(files))
    assert any("foreign name" in d.message for d in exc.value.diagnostics)


def test_imported_body_errors_cite_imported_file():
    files = {
        "a.spectra": 'import "b.spectra";\nspec A env boolean x;'
                     ' sys boolean y;\nasm alwEv pBad(y);\ngar g: ini y;\n',
        "b.spectra": """spec B
pattern pBad(a) {
  var boolean v;
  alwEv v;
  trans (next(v) <-> next(a));
}
""",
    }
    ast = resolve_imports("a.spectra", loader=_loader(files))
    with pytest.raises(DiagnosticsError) as exc:
        check(ast)
    spans = [d.span.file for d in exc.value.diagnostics]
    assert "b.spectra" in spans


def test_corpus_diagnostic_rendering():
    catalog = SourceCatalog()
    src = "spec S env boolean x;\nsys boolean y;\nasm ini y;\n"
    catalog.add("demo.spectra", src)
    with pytest.raises(DiagnosticsError) as exc:
        check(parse(src, "demo.spectra"))
    rendered = exc.value.diagnostics[0].render(catalog)
    assert rendered.startswith("demo.spectra:3:9: error:")
