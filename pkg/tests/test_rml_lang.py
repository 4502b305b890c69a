import pytest
from hypothesis import given, strategies as st

from rml_equiv.rml_lang import (INT, INTREF, UNIT, RmlSyntaxError, RmlTypeError, TypeSequent,
                                arity, arrows, classify, order, parse_context, parse_term,
                                parse_type, typecheck)
from rml_equiv.rml_lang.types import all_types, size
from strategies import TERM_CTX, int_terms, types


def ty(src, ctx="", k=3):
    return typecheck(parse_term(src), parse_context(ctx), k).ty


def test_basic_typing():
    assert ty("x := y", "x: intref, y: int") == UNIT
    assert ty("mkvar (fun x:unit. 0) (fun y:int. ())") == INTREF
    assert ty("fun x:int. succ x") == arrows(INT, INT)
    assert ty("let c = ref 0 in fun y:unit. !c") == arrows(UNIT, INT)
    assert ty("if 1 then omega else 2") == INT
    assert ty("1 = 2") == INT


@pytest.mark.parametrize("src,ctx", [
    ("x := ()", "x: intref"),
    ("f 1", "f: unit -> unit"),
    ("succ ()", ""),
    ("y", ""),
    ("while () do ()", ""),
])
def test_type_errors(src, ctx):
    with pytest.raises(RmlTypeError):
        ty(src, ctx)


@pytest.mark.parametrize("src", ["1 +", "fun x. x", "let = 1 in 2", "(1"])
def test_syntax_errors(src):
    with pytest.raises(RmlSyntaxError):
        parse_term(src)


def test_literal_range_checked():
    with pytest.raises(RmlTypeError):
        ty("5", k=3)


def _order(t):
    if t.kind in ("unit", "int"):
        return 0
    if t.kind == "intref":
        return 1
    return max(_order(t.dom) + 1, _order(t.cod))


def _arity(t):
    return 1 if t.kind == "intref" else (0 if not t.is_arrow else 1 + _arity(t.cod))


def test_order_arity_exhaustive():
    n = 0
    for t in all_types(6):
        assert order(t) == _order(t) and arity(t) == _arity(t)
        assert size(t) <= 6
        n += 1
    assert n == 66


@given(types)
def test_type_print_parse_roundtrip(t):
    assert parse_type(str(t)) == t


@given(types, types)
def test_classify_consistent(a, b):
    for seq in (TypeSequent((), a), TypeSequent((("f", a),), b)):
        c = classify(seq)
        if c.undecidable_reason:
            assert not c.in_pstrict and not c.in_rforml and not c.unknown
        if c.unknown:
            assert not (c.in_pstrict or c.in_rforml or c.undecidable_reason)
        assert c.unknown or c.in_pstrict or c.in_rforml or c.undecidable_reason


@given(int_terms)
def test_generated_terms_are_int(src):
    assert ty(src, TERM_CTX) == INT


@given(int_terms)
def test_sugar_expansion_typing(src):
    # `M; N` is `let _ = M in N`, both must type the same way
    a = ty(f"({src}); ()", TERM_CTX)
    b = ty(f"let u = ({src}) in ()", TERM_CTX)
    assert a == b == UNIT


ROWS = [
    # decidable here
    ("", "unit -> int -> unit", "both"),
    ("f: unit -> unit -> unit", "unit -> unit", "rforml"),
    ("f: (int -> int) -> int", "int -> int", "both"),
    ("f: (int -> int) -> (int -> int) -> int", "int -> int", "rforml"),
    ("f: (int -> int -> int) -> int", "unit", "pstrict"),
    # undecidable
    ("", "((unit -> unit) -> unit) -> unit", "ThirdOrder"),
    ("f: (((unit -> unit) -> unit) -> unit) -> unit", "unit", "LhsFourthOrder"),
    ("", "(unit -> unit) -> unit -> unit", "NonFinalFirstOrderArg"),
    ("f: ((unit -> unit) -> unit -> unit) -> unit", "unit", "NonFinalFirstOrderArg"),
    ("", "(unit -> unit) -> (unit -> unit) -> unit", "TwoFirstOrderArgs"),
    # unknown
    ("", "unit -> (unit -> unit) -> unit", "unknown"),
    ("f: ((unit -> unit) -> unit) -> unit", "unit -> unit -> unit", "unknown"),
    ("f: (unit -> unit -> unit) -> (unit -> unit) -> unit", "unit -> unit", "unknown"),
]


def row_ok(ctx, subject, expected):
    c = classify(TypeSequent(tuple(parse_context(ctx)), parse_type(subject)))
    if expected == "both":
        return c.in_pstrict and c.in_rforml
    if expected == "pstrict":
        return c.in_pstrict and not c.in_rforml
    if expected == "rforml":
        return c.in_rforml and not c.in_pstrict
    if expected == "unknown":
        return c.unknown
    return c.undecidable_reason == expected


@pytest.mark.parametrize("ctx,subject,expected", ROWS)
def test_classifier_rows(ctx, subject, expected):
    assert row_ok(ctx, subject, expected)


def test_classifier_first_order_context():
    c = classify(TypeSequent((("f", parse_type("(int -> int -> int) -> int")),), UNIT))
    assert c.in_pstrict and not c.in_rforml


def test_context_parse():
    ctx = parse_context("f: (unit -> unit) -> unit, x: intref")
    assert [n for n, _ in ctx] == ["f", "x"]
    assert ctx[1][1] == INTREF
