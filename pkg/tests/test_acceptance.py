"""Acceptance suite: one pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py` (the lines appear in the terminal
summary) or directly with `python tests/test_acceptance.py`.
"""
import os
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from rml_equiv.arena import prearena_of_sequent  # noqa: E402
from rml_equiv.compile_pstrict import check_invariants, compile_with  # noqa: E402
from rml_equiv.coverability import find_witness, is_empty  # noqa: E402
from rml_equiv.equiv import (EQUIVALENT, INEQUIVALENT, UNKNOWN, align, bounded_language_equal,  # noqa: E402
                             compile_term, decide, prepare)
from rml_equiv.ndcma import DataWord, accepts, complement, from_text, intersect, union  # noqa: E402
from rml_equiv.rml_lang import TypeSequent, classify, parse_context, parse_type  # noqa: E402
from cases import coverability_cases, random_deterministic, walk  # noqa: E402
from corpus import COUNTER, COUNTER_PER_THREAD, EXPECTED, all_terms, ordered_pairs  # noqa: E402

HERE = os.path.dirname(__file__)
RESULTS: list = []


def record(n, ok, seconds, limit, note):
    ok = ok and (limit is None or seconds < limit)
    budget = f" (limit {limit:.0f}s)" if limit else ""
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {note}; {seconds:.1f}s{budget}")
    return ok


def golden(name, seq):
    p = prearena_of_sequent(seq, 2)
    with open(os.path.join(HERE, "golden", f"{name}.wndcma"), encoding="utf-8") as fh:
        return from_text(fh.read(), p.moves)


def test_criterion_1_counter_golden():
    t0 = time.time()
    t, seq = prepare(COUNTER, "", 2)
    g = golden("counter_once", seq)
    diffs = {f: bounded_language_equal(*align(compile_term(t, seq, 2, f), g), 8) for f in ("pstrict", "rforml")}
    ok = all(d is None for d in diffs.values())
    assert record(1, ok, time.time() - t0, 10, f"one-shot counter vs golden to length 8, differences {diffs}")


TWO_THREADS = "q0@0 a0@0 q1@1(0) a1@1(0) q1@2(0) a1@2(0) q2@3(1) a2@3(1) q2@4(2) a2@4(2)"
ONE_THREAD = "q0@0 a0@0 q1@1(0) a1@1(0) q2@3(1) a2@3(1) q2@4(1) a2@4(1)"


def test_criterion_2_per_thread_golden():
    t0 = time.time()
    t, seq = prepare(COUNTER_PER_THREAD, "", 2)
    g = golden("counter_per_thread", seq)
    notes, ok = [], True
    for f in ("pstrict", "rforml"):
        a = compile_term(t, seq, 2, f)
        d = bounded_language_equal(*align(a, g), 10)
        two = accepts(a, DataWord.parse(TWO_THREADS, a.alphabet))
        one = accepts(a, DataWord.parse(ONE_THREAD, a.alphabet))
        ok = ok and d is None and two and not one
        notes.append(f"{f}: diff={d}, two-thread={two}, one-thread={one}")
    assert record(2, ok, time.time() - t0, 60, "per-thread counter to length 10; " + "; ".join(notes))


def test_criterion_3_invariants():
    t0 = time.time()
    terms = list(all_terms())
    total = failed = 0
    for g, name, src, ctx, k in terms:
        t, seq = prepare(src, ctx, k)
        fc = classify(seq)
        for enc, ok in (("P", fc.in_pstrict), ("R", fc.in_rforml)):
            if not ok:
                continue
            for a in compile_with(enc, t, seq, k).members.values():
                total += 1
                failed += not check_invariants(a).ok
    ok = failed == 0 and len(terms) >= 20
    assert record(3, ok, time.time() - t0, None,
                  f"{len(terms)} corpus terms, {total} compiled members, {failed} invariant failures")


def test_criterion_4_oracle_coherence():
    t0 = time.time()
    agree = disagree = unknown = long_witness = 0
    bad = []
    for g, (an, asrc), (bn, bsrc), ctx, k in ordered_pairs():
        m, n = prepare(asrc, ctx, k), prepare(bsrc, ctx, k)
        v = decide(m, n, k)
        if v.kind == UNKNOWN:
            unknown += 1
            continue
        x, y = align(compile_term(*m, k, v.fragment), compile_term(*n, k, v.fragment))
        exp = EXPECTED.get((g, an, bn), EXPECTED.get((g, bn, an)))
        ok = exp is None or exp == (v.kind == EQUIVALENT)
        if v.kind == EQUIVALENT:
            ok = ok and bounded_language_equal(x, y, 8) is None
        else:
            w = v.witness
            ok = ok and accepts(x, w) != accepts(y, w)
            if len(w) <= 8:
                ok = ok and bounded_language_equal(x, y, 8) is not None
            else:
                # no short distinguishing play exists; confirm at the witness length
                long_witness += 1
                ok = ok and bounded_language_equal(x, y, 8) is None
                ok = ok and bounded_language_equal(x, y, len(w)) is not None
        if ok:
            agree += 1
        else:
            disagree += 1
            bad.append(f"{an}/{bn}")
    ok = disagree == 0
    assert record(4, ok, time.time() - t0, None,
                  f"{agree} pairs agree, {disagree} disagree {bad}, {unknown} unknown (excluded), "
                  f"{long_witness} confirmed beyond length 8")


SPOT = [
    ("f ()", "f (); ()", "f: unit -> unit", 3, EQUIVALENT),
    ("fun x:int. x", "fun x:int. succ (pred x)", "", 3, EQUIVALENT),
    (COUNTER, "fun y:unit. omega", "", 2, INEQUIVALENT),
    ("!x", "!x; !x", "x: intref", 2, INEQUIVALENT),
]


def test_criterion_5_spot_checks():
    t0 = time.time()
    notes, ok = [], True
    for a, b, ctx, k, want in SPOT:
        m, n = prepare(a, ctx, k), prepare(b, ctx, k)
        v = decide(m, n, k)
        x, y = align(compile_term(*m, k, v.fragment), compile_term(*n, k, v.fragment))
        d = bounded_language_equal(x, y, 8)
        good = v.kind == want and ((d is None) == (want == EQUIVALENT))
        if want == INEQUIVALENT:
            good = good and accepts(x, v.witness) != accepts(y, v.witness)
        ok = ok and good
        notes.append(f"{a!r} vs {b!r}: {v.kind}")
    assert record(5, ok, time.time() - t0, 120, "; ".join(notes))


def test_criterion_6_boolean_closure():
    t0 = time.time()
    letters = ("a", "b")
    words = violations = 0
    for i in range(5):
        a = random_deterministic(2 * i, letters, 1)
        b = random_deterministic(2 * i + 1, letters, 1)
        autos = [a, b, intersect(a, b), union(a, b), complement(a), complement(b)]
        for f in walk(autos, letters, 1, 6):
            words += 1
            if f[2] != (f[0] and f[1]) or f[3] != (f[0] or f[1]) or f[4] == f[0] or f[5] == f[1]:
                violations += 1
    ok = violations == 0
    assert record(6, ok, time.time() - t0, None,
                  f"10 random automata, every canonical word to length 6 ({words} runs simulated), "
                  f"{violations} law violations")


def test_criterion_7_coverability():
    t0 = time.time()
    wrong = []
    cases = coverability_cases()
    for name, a, empty in cases:
        e = is_empty(a)
        w = find_witness(a, 10)
        if e != empty or (w is None) != empty or (w is not None and not accepts(a, w)):
            wrong.append(name)
    ok = not wrong and len(cases) == 15 and any(n == "two_siblings" for n, _, _ in cases)
    assert record(7, ok, time.time() - t0, None, f"{len(cases)} hand-built automata, mismatches {wrong}")


TABLE = [
    # decidable rows
    ("f: (unit -> int -> unit) -> unit", "unit -> int -> unit", "pstrict"),
    ("f: (unit -> unit) -> (int -> int) -> unit", "int -> unit -> int", "rforml"),
    # third-order rows
    ("", "((unit -> unit) -> unit) -> unit", "ThirdOrder"),
    ("f: (((unit -> unit) -> unit) -> unit) -> unit", "unit", "LhsFourthOrder"),
    # second-order rows
    ("", "(unit -> unit) -> unit -> unit", "NonFinalFirstOrderArg"),
    ("f: ((unit -> unit) -> unit -> unit) -> unit", "unit", "NonFinalFirstOrderArg"),
    # unknown rows
    ("f: (unit -> unit -> unit) -> (unit -> unit) -> unit", "unit -> unit", "unknown"),
    ("", "unit -> (unit -> unit) -> unit", "unknown"),
    ("f: ((unit -> unit) -> unit) -> unit", "unit -> unit -> unit", "unknown"),
]


def test_criterion_8_classifier_table():
    t0 = time.time()
    wrong = []
    for ctx, subject, want in TABLE:
        c = classify(TypeSequent(tuple(parse_context(ctx)), parse_type(subject)))
        got = {"pstrict": c.in_pstrict, "rforml": c.in_rforml, "unknown": c.unknown}.get(want)
        if got is None:
            got = c.undecidable_reason == want
        if not got:
            wrong.append(f"{ctx} |- {subject}: {c.describe()}")
    ok = not wrong
    assert record(8, ok, time.time() - t0, None, f"{len(TABLE)} table rows, mismatches {wrong}")


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                fails += 1
            print(RESULTS[-1], flush=True)
    sys.exit(1 if fails else 0)
