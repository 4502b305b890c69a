"""Equivalence checking, the bounded oracle, and decoding of witness words."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .arena import INITIAL, RHS, Arena, Move, move_text, prearena_of_sequent
from .compile_pstrict import compile_with
from .coverability import DifferenceSystem, ResourceLimit, backward_reach, find_witness
from .family import FragmentViolation, cleanup, merge_family
from .ndcma import DataWord, Wndcma, accepted_words, accepts
from .rml_lang.classify import classify
from .rml_lang.types import TypeSequent

EQUIVALENT = "Equivalent"
INEQUIVALENT = "Inequivalent"
UNKNOWN = "Unknown"


class NotDecidableFragment(Exception):
    def __init__(self, msg, reason=None):
        super().__init__(msg)
        self.reason = reason


class MalformedWord(Exception):
    pass


class AmbiguousPointer(Exception):
    pass


@dataclass
class Play:
    moves: list
    pointers: list  # index of the justifier, None for the initial move

    def render(self) -> str:
        out = []
        for i, (m, p) in enumerate(zip(self.moves, self.pointers)):
            out.append(f"{i}:{move_text(m)}" + ("" if p is None else f"->{p}"))
        return " ".join(out) if out else "ε"


@dataclass
class Verdict:
    kind: str
    witness: DataWord | None = None
    play: Play | None = None
    accepted_by: str | None = None  # "M" or "N": which term has the witness play
    fragment: str | None = None
    detail: str = ""

    def __bool__(self):
        return self.kind == EQUIVALENT


# ------------------------------------------------------------- compilation

def choose_fragment(seq: TypeSequent, fragment: str | None = None) -> str:
    fc = classify(seq)
    if fragment is not None:
        ok = fc.in_rforml if fragment == "rforml" else fc.in_pstrict
        if not ok:
            raise NotDecidableFragment(f"{seq} is not in the {fragment} fragment",
                                       fc.undecidable_reason)
        return fragment
    if fc.in_rforml:
        return "rforml"
    if fc.in_pstrict:
        return "pstrict"
    raise NotDecidableFragment(f"{seq}: {fc.describe()}", fc.undecidable_reason)


def compile_term(t, seq: TypeSequent, k: int = 3, fragment: str | None = None) -> Wndcma:
    """Compile, merge and clean one canonical term."""
    frag = choose_fragment(seq, fragment)
    fam = compile_with("R" if frag == "rforml" else "P", t, seq, k)
    return cleanup(merge_family(fam))


def align(a: Wndcma, b: Wndcma) -> tuple[Wndcma, Wndcma]:
    """Same alphabet and level for both (extra letters simply have no transitions)."""
    alpha = a.alphabet | b.alphabet
    lv = max(a.level, b.level)
    return (Wndcma(lv, alpha, a.names, a.initial, a.finals, a.delta),
            Wndcma(lv, alpha, b.names, b.initial, b.finals, b.delta))


def _one_way(x: Wndcma, y: Wndcma, budget: int, witness_len: int):
    """Shortest word accepted by x but not y: None if there is none, UNKNOWN if not found in time."""
    system = DifferenceSystem(x, y)
    _, covered = backward_reach(system, budget)
    if not covered:
        return None
    for n in (4, 8, 12, 20, witness_len):
        w = find_witness(system, n, budget)
        if w is not None:
            return w
    return UNKNOWN


def automata_equal(a: Wndcma, b: Wndcma, budget: int = 200_000, witness_len: int = 40):
    """(kind, witness, side) comparing the two languages by coverability.

    The two inclusions are independent and run as separate tasks.
    """
    a, b = align(a, b)
    with ThreadPoolExecutor(max_workers=2) as pool:
        futs = {side: pool.submit(_one_way, x, y, budget, witness_len)
                for side, (x, y) in (("M", (a, b)), ("N", (b, a)))}
        res = {side: f.result() for side, f in futs.items()}
    best = None
    for side in ("M", "N"):
        w = res[side]
        if w is None:
            continue
        if w == UNKNOWN:
            return UNKNOWN, None, side
        if best is None or len(w) < len(best[0]):
            best = (w, side)
    if best is None:
        return EQUIVALENT, None, None
    return INEQUIVALENT, best[0], best[1]


def decide(m, n, k: int = 3, budget: int = 200_000, fragment: str | None = None) -> Verdict:
    """Observational equivalence of two canonical terms.

    `m` and `n` are (canonical term, sequent) pairs with the same sequent.
    """
    (tm, sm), (tn, sn) = m, n
    if sm != sn:
        raise ValueError(f"sequents differ: {sm} vs {sn}")
    frag = choose_fragment(sm, fragment)
    a = compile_term(tm, sm, k, frag)
    b = compile_term(tn, sn, k, frag)
    try:
        kind, w, side = automata_equal(a, b, budget)
    except ResourceLimit as e:
        return Verdict(UNKNOWN, fragment=frag, detail=f"budget {e.budget} exhausted")
    if kind != INEQUIVALENT:
        return Verdict(kind, fragment=frag)
    owner = a if side == "M" else b
    play = decode_word(prearena_of_sequent(sm, k), w,
                       "pstrict" if frag == "pstrict" else "rforml", owner)
    return Verdict(INEQUIVALENT, w, play, side, frag)


# --------------------------------------------------------------- the oracle

def bounded_language_equal(a: Wndcma, b: Wndcma, max_len: int):
    """First canonical word of length ≤ max_len on which a and b disagree, or None.

    Both languages are enumerated by exploring runs, which visits exactly the
    accepted canonical words; the difference is then ordered shortest first.
    """
    la = accepted_words(a, max_len)
    lb = accepted_words(b, max_len)
    diff = la ^ lb
    if not diff:
        return None
    return min(diff, key=lambda w: (len(w), w.text()))


# ----------------------------------------------------------------- decoding

def _labels(p: Arena) -> dict:
    return p.label


def _enablers(p: Arena) -> dict:
    return p.enablers()


def decode_word(p: Arena, w: DataWord, encoding: str = "pstrict", automaton: Wndcma | None = None) -> Play:
    """Recover justification pointers of an encoded play and validate it.

    In the restricted encoding the pointer of a P-question hanging from a
    repeated answer is carried by src/tgt tags; an untagged word is resolved
    by probing the automaton with tagged variants.
    """
    moves = [m.untagged() for m in w.letters]
    for m in moves:
        if m not in p.label:
            raise MalformedWord(f"{m} is not a move of the prearena")
    enab = _enablers(p)
    pm = w.parent_map()
    ptr: list = [None] * len(moves)
    answered: set = set()
    for j, m in enumerate(moves):
        lab = p.label[m]
        if m.owner == INITIAL:
            if j != 0:
                raise MalformedWord("initial move after the start")
            continue
        cands = [i for i in range(j) if moves[i] in enab[m]]
        if lab[1] == "A":
            pend = [i for i in cands if i not in answered and p.label[moves[i]][1] == "Q"]
            if encoding == "pstrict" or m.owner == RHS:
                pend = [i for i in pend if w.ids[i] == w.ids[j]]
            if not pend:
                raise MalformedWord(f"answer {move_text(m)} at {j} has no pending question")
            ptr[j] = pend[-1]
            answered.add(pend[-1])
            continue
        if encoding == "pstrict" or m.owner == RHS:
            par = pm.get(w.ids[j])
            cands = [i for i in cands if w.ids[i] == par]
        else:
            view = _view(moves, ptr, p, j, lab[0])
            cands = [i for i in cands if i in view]
        if len(cands) > 1:
            cands = _by_tags(w, j, cands, automaton)
        if len(cands) != 1:
            raise AmbiguousPointer(f"move {j} ({move_text(m)}) has justifier candidates {cands}")
        ptr[j] = cands[0]
    play = Play(moves, ptr)
    problems = validate_play(p, play)
    if problems:
        raise MalformedWord("; ".join(problems))
    return play


def _by_tags(w: DataWord, j: int, cands: list, automaton):
    """Candidates confirmed by the src/tgt tags (at most one pair per word)."""
    if w.letters[j].tag == "tgt":
        return [i for i in cands if w.letters[i].tag == "src"]
    if automaton is None:
        return cands
    hits = []
    base = [m.untagged() for m in w.letters]
    for i in cands:
        letters = list(base)
        letters[i] = letters[i].tagged("src")
        letters[j] = letters[j].tagged("tgt")
        if letters[i] in automaton.alphabet and letters[j] in automaton.alphabet and \
                accepts(automaton, DataWord(tuple(letters), w.ids, w.parents)):
            hits.append(i)
    return hits


def decode_tagging(a: Wndcma, p: Arena, w: DataWord) -> Play:
    """Resolve every pointer of an accepted restricted-encoding word by tag probes."""
    if not accepts(a, w):
        raise MalformedWord("word is not accepted")
    return decode_word(p, w, "rforml", a)


def _view(moves, ptr, p: Arena, j: int, who: str) -> set:
    """Indices in the P-view (who="P") or O-view (who="O") of moves[:j]."""
    out = []
    i = j - 1
    while i >= 0:
        m = moves[i]
        own = p.label[m][0]
        out.append(i)
        if m.owner == INITIAL:
            break
        if own != who:
            # a move of the other player: jump to its justifier
            if ptr[i] is None:
                break
            i = ptr[i]
        else:
            i -= 1
    return set(out)


def validate_play(p: Arena, play: Play) -> list:
    """Alternation, well-bracketing, visibility and completeness problems (empty if fine)."""
    probs = []
    ms, ptr = play.moves, play.pointers
    open_qs: list = []
    for j, m in enumerate(ms):
        who, kind = p.label[m]
        if j % 2 == 0 and who != "O" or j % 2 == 1 and who != "P":
            probs.append(f"alternation broken at {j}")
        if j > 0:
            if ptr[j] is None:
                probs.append(f"move {j} has no justifier")
            elif ptr[j] not in _view(ms, ptr, p, j, who):
                probs.append(f"move {j} points outside its view")
        if kind == "Q":
            open_qs.append(j)
        else:
            if not open_qs or open_qs[-1] != ptr[j]:
                probs.append(f"answer {j} is not to the pending question")
            elif open_qs:
                open_qs.pop()
    if open_qs:
        probs.append("play is not complete")
    return probs


def prepare(source: str, context=(), k: int = 3):
    """Parse, typecheck and canonicalise; returns (canonical term, sequent)."""
    from .canonical import canonicalize
    from .rml_lang import parse_context, parse_term, typecheck
    ctx = parse_context(context) if isinstance(context, str) else list(context)
    t = typecheck(parse_term(source), ctx, k=k)
    return canonicalize(t, ctx), TypeSequent(tuple(ctx), t.ty)
