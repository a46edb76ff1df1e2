import random

import pytest

from helpers import corpus_paths, random_bool_expr
from spectra.diagnostics import DiagnosticsError
from spectra.syntax import (Binary, Const, IntLit, NameRef, Unary, parse,
                            parse_expression, print_expr, print_spec,
                            tokenize)
from spectra.syntax import nodes as n


def test_tokenize_keyword_alternatives():
    short = tokenize("asm ini x;")
    verbose = tokenize("assumption initially x;")
    assert [t.kind for t in short] == [t.kind for t in verbose]


def test_tokenize_empty_input():
    assert tokenize("") == []


def test_tokenize_int_range():
    kinds = [t.kind for t in tokenize("Int(0..50)")]
    assert kinds == ["INTTYPE", "LPAR", "INT", "DOTDOT", "INT", "RPAR"]


def test_tokenize_comments_skipped():
    toks = tokenize("a // comment\n /* block\n comment */ b")
    assert [t.text for t in toks] == ["a", "b"]


def test_tokenize_unrecognized_character():
    with pytest.raises(DiagnosticsError) as exc:
        tokenize("a # b")
    assert "unrecognized" in exc.value.diagnostics[0].message


def test_parse_not_binds_stronger_than_and():
    e = parse_expression("!a & b")
    assert e == Binary("and", Unary("not", NameRef("a")), NameRef("b"))


def test_parse_implies_left_associative():
    e = parse_expression("a -> b -> c")
    assert e == Binary("implies",
                       Binary("implies", NameRef("a"), NameRef("b")),
                       NameRef("c"))


def test_parse_minimal_kernel_spec():
    ast = parse("spec S sys boolean y; gar ini y;")
    assert ast.name == "S"
    assert len(ast.elements) == 2


def test_parse_define_with_equality_under_and():
    ast = parse("spec D sys {STOP, BWD} mLeft; sys {GO, BACK} mRight;"
                "define backing := mLeft = BWD & mRight = BACK;")
    define = ast.elements[-1]
    assert isinstance(define, n.Define)
    assert define.expr.op == "and"
    assert define.expr.left.op == "eq"
    assert define.expr.right.op == "eq"


def test_parse_precedence_table():
    cases = {
        "a | b & c": Binary("or", NameRef("a"),
                            Binary("and", NameRef("b"), NameRef("c"))),
        "a <-> b | c": Binary("iff", NameRef("a"),
                              Binary("or", NameRef("b"), NameRef("c"))),
        "a -> b <-> c": Binary("implies", NameRef("a"),
                               Binary("iff", NameRef("b"), NameRef("c"))),
        "1 + 2 * 3 < 4": Binary("lt",
                                Binary("add", IntLit(1),
                                       Binary("mul", IntLit(2), IntLit(3))),
                                IntLit(4)),
        "a = b & c": Binary("and", Binary("eq", NameRef("a"), NameRef("b")),
                            NameRef("c")),
        "x S y S z": Binary("since", Binary("since", NameRef("x"),
                                            NameRef("y")), NameRef("z")),
        "- 2 + 3": Binary("add", Unary("neg", IntLit(2)), IntLit(3)),
    }
    for src, want in cases.items():
        assert parse_expression(src) == want, src


def test_parse_next_requires_primary_operand():
    assert parse_expression("next(a & b)") == \
        Unary("next", Binary("and", NameRef("a"), NameRef("b")))
    assert parse_expression("next x & y") == \
        Binary("and", Unary("next", NameRef("x")), NameRef("y"))


def test_past_keywords_short_and_verbose():
    assert parse_expression("Y x") == parse_expression("PREV x")
    assert parse_expression("H x") == parse_expression("HISTORICALLY x")
    assert parse_expression("O x") == parse_expression("ONCE x")
    assert parse_expression("a S b") == parse_expression("a SINCE b")


def test_parser_error_recovery_reports_multiple():
    src = """spec Broken
env boolean x
sys boolean ;
gar ini x;
gar trans (x & );
"""
    with pytest.raises(DiagnosticsError) as exc:
        parse(src)
    assert len(exc.value.diagnostics) >= 2
    assert all("expected" in d.message for d in exc.value.diagnostics)


def test_print_implication_chain_without_parens():
    e = Binary("implies", Binary("implies", NameRef("a"), NameRef("b")),
               NameRef("c"))
    assert print_expr(e) == "a -> b -> c"
    assert parse_expression(print_expr(e)) == e


def test_print_next_always_parenthesized():
    assert print_expr(Unary("next", NameRef("x"))) == "next(x)"


def test_print_right_nested_implication_keeps_parens():
    e = Binary("implies", NameRef("a"),
               Binary("implies", NameRef("b"), NameRef("c")))
    printed = print_expr(e)
    assert parse_expression(printed) == e


def test_corpus_round_trip():
    for path in corpus_paths(include_lib=True):
        with open(path, encoding="utf-8") as f:
            text = f.read()
        ast = parse(text, path)
        printed = print_spec(ast)
        again = parse(printed, path)
        assert again == ast, f"round-trip failed for {path}"


def test_random_expression_print_parse_fixpoint():
    rng = random.Random(20240817)
    names = ["a", "b", "c"]
    for _ in range(10000):
        e = random_bool_expr(rng, names, 3)
        printed = print_expr(e)
        assert parse_expression(printed) == e, printed
