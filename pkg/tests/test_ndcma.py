import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from rml_equiv.arena import prearena_of_sequent
from rml_equiv.ndcma import (AutomatonBuilder, Configuration, DataWord, NotDeterministic, accepted_words,
                             accepts, canonical_words, check_level_discipline, complement, complete,
                             from_text, intersect, is_deterministic, run, step, to_text, union)
from rml_equiv.rml_lang import TypeSequent, parse_type
from cases import random_deterministic, walk
from strategies import deterministic_automata

HERE = os.path.dirname(__file__)


def golden(name, subject):
    p = prearena_of_sequent(TypeSequent((), parse_type(subject)), 2)
    with open(os.path.join(HERE, "golden", f"{name}.wndcma"), encoding="utf-8") as fh:
        return from_text(fh.read(), p.moves)


@pytest.fixture(scope="module")
def once():
    return golden("counter_once", "unit -> unit")


@pytest.fixture(scope="module")
def per_thread():
    return golden("counter_per_thread", "unit -> unit -> unit")


def word(a, text):
    return DataWord.parse(text, a.alphabet)


def letter(a, name):
    return next(m for m in a.alphabet if str(m) == name)


def test_step_first_question(once):
    c = Configuration.initial(once)
    (c1,) = step(once, c, letter(once, "q0"), (0,))
    assert once.state_name(c1.state) == "4" and once.state_name(c1.mem()[(0,)]) == "4"


def test_step_stuck_after_one_call(once):
    w = word(once, "q0@0 a0@0 q1@1(0) a1@1(0)")
    (c,) = run(once, w)
    assert once.state_name(c.state) == "7"
    assert step(once, c, letter(once, "q1"), (0, 2)) == set()


def test_step_unknown_letter(once):
    assert step(once, Configuration.initial(once), "zz", (0,)) == set()


def test_accepts_examples(once):
    assert accepts(once, word(once, "ε"))
    assert accepts(once, word(once, "q0@0 a0@0 q1@1(0) a1@1(0)"))
    assert not accepts(once, word(once, "q0@0 a0@0 q1@1(0) a1@1(0) q1@2(0)"))


def test_determinism(once):
    assert is_deterministic(once)
    b = AutomatonBuilder(0, ["a"])
    b.initial = b.state("i")
    b.add(b.state("i"), "a", (None,), b.state("j"), (b.state("j"),))
    b.add(b.state("i"), "a", (None,), b.state("k"), (b.state("k"),))
    nd = b.build()
    assert not is_deterministic(nd)
    with pytest.raises(NotDeterministic):
        complete(nd)
    assert is_deterministic(intersect(once, once))


def test_complete_preserves_language(once):
    c = complete(once)
    for flags in walk([once, c], once.alphabet, 1, 6):
        assert flags[0] == flags[1]


def test_complete_of_complete_adds_unreachable_sink(once):
    c = complete(once)
    cc = complete(c)
    assert len(cc.names) == len(c.names) + 1
    assert cc.n_transitions() > c.n_transitions()
    for flags in walk([c, cc], once.alphabet, 1, 4):
        assert flags[0] == flags[1]


def test_double_complement(once):
    cc = complement(complement(once))
    for flags in walk([once, cc], once.alphabet, 1, 6):
        assert flags[0] == flags[1]


def test_intersect_with_complement_empty(once):
    assert accepted_words(intersect(once, complement(once)), 8) == set()


def test_union_with_complement_universal(once):
    u = union(once, complement(once))
    assert all(f[0] for f in walk([u], once.alphabet, 1, 6))


def test_level_discipline(once, per_thread):
    r = check_level_discipline(once)
    assert r.ok
    lv = {once.state_name(q): l for q, l in r.level_map().items()}
    assert lv["4"] == lv["5.0"] == lv["5.1"] == 0 and lv["6"] == lv["7"] == 1
    r = check_level_discipline(per_thread)
    assert r.ok
    lv = {per_thread.state_name(q): l for q, l in r.level_map().items()}
    assert lv["2"] == lv["3"] == 0 and lv["4"] == lv["5.0"] == lv["5.1"] == 1 and lv["6"] == lv["7"] == 2


def test_level_violation_reported():
    b = AutomatonBuilder(1, ["a"])
    b.initial = b.state("i")
    s = b.state("s")
    b.add(b.initial, "a", (None,), s, (s,))
    b.add(s, "a", (s, None), s, (s, s))
    r = check_level_discipline(b.build())
    assert not r.ok and r.violations


def test_text_roundtrip(once, per_thread):
    for a in (once, per_thread):
        b = from_text(to_text(a), a.alphabet)
        assert to_text(b) == to_text(a)


def test_accepted_words_matches_filter(once):
    got = accepted_words(once, 4)
    want = {w for w in canonical_words(once.alphabet, 1, 4) if accepts(once, w)}
    assert got == want


def _relabel(w, rng):
    ids = sorted(set(d for d, _ in w.parents))
    perm = dict(zip(ids, rng.sample(range(100, 100 + 3 * len(ids)), len(ids))))
    parents = tuple(sorted((perm[d], None if p is None else perm[p]) for d, p in w.parents))
    return DataWord(w.letters, tuple(perm[d] for d in w.ids), parents)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_membership_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    a = golden("counter_per_thread", "unit -> unit -> unit")
    words = sorted(accepted_words(a, 8), key=lambda w: w.text())
    w = rng.choice(words)
    v = _relabel(w, rng)
    assert accepts(a, v)
    assert v.canonical() == w.canonical()


@settings(max_examples=25)
@given(deterministic_automata(), st.integers(0, 10**6))
def test_deterministic_single_run(a, seed):
    rng = random.Random(seed)
    words = list(canonical_words(a.alphabet, a.level, 4))
    for w in rng.sample(words, 30):
        assert len(run(a, w)) <= 1


@settings(max_examples=15)
@given(deterministic_automata(n_states=2), deterministic_automata(n_states=2))
def test_boolean_laws_random(a, b):
    autos = [a, b, intersect(a, b), union(a, b), complement(a)]
    for f in walk(autos, sorted(a.alphabet), 1, 4):
        assert f[2] == (f[0] and f[1])
        assert f[3] == (f[0] or f[1])
        assert f[4] == (not f[0])


def test_boolean_laws_seeded():
    a = random_deterministic(1, ("a", "b"), 0, density=0.6)
    b = random_deterministic(2, ("a", "b"), 0, density=0.6)
    for f in walk([a, b, intersect(a, b), union(a, b), complement(b)], ("a", "b"), 0, 5):
        assert (f[2], f[3], f[4]) == (f[0] and f[1], f[0] or f[1], not f[1])
