import os

import pytest

from rml_equiv import decide, prepare
from rml_equiv.arena import prearena_of_sequent
from rml_equiv.equiv import (EQUIVALENT, INEQUIVALENT, UNKNOWN, MalformedWord, NotDecidableFragment,
                             align, bounded_language_equal, compile_term, decode_word, validate_play)
from rml_equiv.ndcma import DataWord, accepts, from_text
from rml_equiv.rml_lang import TypeSequent, parse_type
from corpus import COUNTER, COUNTER_PER_THREAD, EXPECTED, GROUPS, all_terms, ordered_pairs

HERE = os.path.dirname(__file__)


def pair(a, b, ctx="", k=3, **kw):
    return decide(prepare(a, ctx, k), prepare(b, ctx, k), k, **kw)


def golden(name, subject):
    p = prearena_of_sequent(TypeSequent((), parse_type(subject)), 2)
    with open(os.path.join(HERE, "golden", f"{name}.wndcma"), encoding="utf-8") as fh:
        return p, from_text(fh.read(), p.moves)


def test_call_then_unit():
    assert pair("f ()", "f (); ()", "f: unit -> unit").kind == EQUIVALENT


def test_succ_pred_wraps():
    assert pair("fun x:int. x", "fun x:int. succ (pred x)").kind == EQUIVALENT


def test_counter_vs_divergence():
    v = pair(COUNTER, "fun y:unit. omega", k=2)
    assert v.kind == INEQUIVALENT and v.accepted_by == "M"
    assert [str(m) for m in v.witness.letters] == ["q0", "a0", "q1", "a1"]
    assert v.play.pointers == [None, 0, 1, 2]


def test_double_read_observable():
    v = pair("!x", "!x; !x", "x: intref", 2)
    assert v.kind == INEQUIVALENT
    assert validate_play(prearena_of_sequent(prepare("!x", "x: intref", 2)[1], 2), v.play) == []


def test_not_decidable():
    with pytest.raises(NotDecidableFragment) as e:
        pair("fun f:unit -> unit. fun x:unit. f ()", "fun f:unit -> unit. fun x:unit. ()")
    assert e.value.reason == "NonFinalFirstOrderArg"


def test_forced_fragment():
    v = pair("f ()", "f (); ()", "f: unit -> unit", fragment="pstrict")
    assert v.kind == EQUIVALENT and v.fragment == "pstrict"
    with pytest.raises(NotDecidableFragment):
        pair("f (fun u:unit. fun v:unit. ())", "f (fun u:unit. fun v:unit. ())",
             "f: (unit -> unit -> unit) -> unit", fragment="rforml")


def test_sequent_mismatch():
    with pytest.raises(ValueError):
        decide(prepare("1", "", 3), prepare("()", "", 3), 3)


def test_tiny_budget_unknown():
    v = pair(COUNTER_PER_THREAD, "let c = ref 0 in fun x:unit. fun y:unit. if !c = 0 then c := 1 else omega",
             k=2, budget=3)
    assert v.kind == UNKNOWN


def test_bounded_examples():
    p, once = golden("counter_once", "unit -> unit")
    assert bounded_language_equal(once, once, 8) is None
    five_one = [q for q in once.states if once.state_name(q) == "5.1"]
    trimmed = once.with_finals(set(once.finals) - set(five_one))
    assert bounded_language_equal(once, trimmed, 6) is None
    _, per = golden("counter_per_thread", "unit -> unit -> unit")
    # shared move names: the first difference is a second call, refused by the one-shot counter
    d = bounded_language_equal(*align(once, per), 6)
    assert d.text() == "q0@0 a0@0 q1@1(0) a1@1(0) q1@2(0) a1@2(0)"


def test_decode_examples():
    p, once = golden("counter_once", "unit -> unit")
    w = DataWord.parse("q0@0 a0@0 q1@1(0) a1@1(0)", once.alphabet)
    play = decode_word(p, w, "pstrict")
    assert play.pointers == [None, 0, 1, 2]
    t, seq = prepare("()", "")
    p0 = prearena_of_sequent(seq)
    w = DataWord.parse("q0@0 a0@0", p0.moves)
    assert decode_word(p0, w).pointers == [None, 0]
    with pytest.raises(MalformedWord):
        decode_word(p0, DataWord.parse("a0@0", p0.moves))


def test_two_thread_decoding():
    p, per = golden("counter_per_thread", "unit -> unit -> unit")
    w = DataWord.parse("q0@0 a0@0 q1@1(0) a1@1(0) q1@2(0) a1@2(0) q2@3(1) a2@3(1) q2@4(2) a2@4(2)",
                       per.alphabet)
    assert accepts(per, w)
    play = decode_word(p, w, "pstrict")
    assert play.pointers[6] == 3 and play.pointers[8] == 5
    assert play.render().startswith("0:q0 1:a0->0")


@pytest.mark.parametrize("g,name,src,ctx,k", list(all_terms()), ids=[t[1] for t in all_terms()])
def test_reflexive(g, name, src, ctx, k):
    assert pair(src, src, ctx, k).kind == EQUIVALENT


PAIRS = [(g, a, b, ctx, k) for g, a, b, ctx, k in ordered_pairs() if a[0] < b[0]]


@pytest.mark.parametrize("g,a,b,ctx,k", PAIRS, ids=[f"{a[0]}-{b[0]}" for _, a, b, _, _ in PAIRS])
def test_symmetric_and_coherent(g, a, b, ctx, k):
    m, n = prepare(a[1], ctx, k), prepare(b[1], ctx, k)
    v1, v2 = decide(m, n, k), decide(n, m, k)
    assert v1.kind == v2.kind
    exp = EXPECTED.get((g, a[0], b[0]), EXPECTED.get((g, b[0], a[0])))
    if exp is not None:
        assert (v1.kind == EQUIVALENT) == exp
    x, y = align(compile_term(*m, k, v1.fragment), compile_term(*n, k, v1.fragment))
    if v1.kind == EQUIVALENT:
        assert bounded_language_equal(x, y, 8) is None
    else:
        w = v1.witness
        assert accepts(x, w) != accepts(y, w)
        assert (accepts(x, w) and v1.accepted_by == "M") or (accepts(y, w) and v1.accepted_by == "N")
        d = bounded_language_equal(x, y, len(w))
        assert d is not None and len(d) == len(w)
        assert validate_play(prearena_of_sequent(m[1], k), v1.play) == []
