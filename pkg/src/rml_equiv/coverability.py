"""Emptiness of WNDCMA by backward coverability over abstract configurations.

An abstract configuration is a control state with the forest of non-⊥ data
values (labelled by their states), taken up to isomorphism.  Embedding of
forests is a well-quasi-order, and the transition relation is monotone for
it: a bigger memory can always replay the moves of a smaller one, since fresh
values never run out.  So the set of configurations from which a final
control state is reachable is upward closed and has a finite basis, which the
backward search below computes.

Systems: the engine works on anything exposing the small interface of
`ExplicitSystem`; `DifferenceSystem` is the lazy product of one automaton
with the complement of another, used to decide language inclusion without
materialising the complement.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .kernels import WILD, embed_forest, forest_from_memory, label_leq
from .ndcma import DataWord, Wndcma

DEAD = -1


class ResourceLimit(Exception):
    """Raised when a search exceeds its budget; the answer is unknown."""

    def __init__(self, budget, explored):
        super().__init__(f"budget of {budget} exceeded after {explored} configurations")
        self.budget = budget
        self.explored = explored


@dataclass(frozen=True)
class AbstractConfig:
    control: object
    forest: tuple = ()

    @staticmethod
    def of(control, memory: dict) -> "AbstractConfig":
        return AbstractConfig(control, forest_from_memory(memory))


def embed_leq(a: AbstractConfig, b: AbstractConfig) -> bool:
    return a.control == b.control and embed_forest(a.forest, b.forest)


# ------------------------------------------------------------------ systems

class ExplicitSystem:
    """A single automaton, labels are its states."""

    def __init__(self, a: Wndcma):
        self.a = a
        self.level = a.level
        self.initial = a.initial
        self._post = a.index_by_sig()
        self._pre: dict = {}
        for (q, m, sig), outs in a.delta.items():
            for q2, upd in outs:
                self._pre.setdefault(q2, []).append((q, m, sig, upd))

    def is_final(self, c) -> bool:
        return c in self.a.finals

    def final_controls(self):
        return sorted(self.a.finals)

    def post(self, c, sig):
        return self._post.get((c, sig), ())

    def pre_entries(self, target):
        return self._pre.get(target, ())


def _holdable(a: Wndcma) -> list:
    """States that can be written at each slot position."""
    out = [set() for _ in range(a.level + 1)]
    for outs in a.delta.values():
        for _, upd in outs:
            for j, s in enumerate(upd):
                out[j].add(s)
    return [sorted(s) for s in out]


class DifferenceSystem:
    """Runs of A in parallel with B, accepting when A accepts and B does not.

    Both automata must be deterministic.  B may die (no transition); from then
    on its control is DEAD and its memory labels are WILD.
    """

    def __init__(self, a: Wndcma, b: Wndcma):
        if a.alphabet != b.alphabet:
            from .ndcma import AlphabetMismatch
            raise AlphabetMismatch("automata over different alphabets")
        self.a, self.b = a, b
        self.level = max(a.level, b.level)
        self.initial = (a.initial, b.initial)
        self._apost = a.index_by_sig()
        self._bpost: dict = {}
        for (q, m, sig), outs in b.delta.items():
            (q2, upd), = outs
            self._bpost[(q, sig, m)] = (q2, upd)
        self._apre: dict = {}
        for (q, m, sig), outs in a.delta.items():
            for q2, upd in outs:
                self._apre.setdefault(q2, []).append((q, m, sig, upd))
        self._bpre: dict = {}
        self._bkeys: dict = {}  # (q, m, nonbot) -> set of concrete sig prefixes
        for (q, m, sig), outs in b.delta.items():
            nb = sum(1 for s in sig if s is not None)
            for q2, upd in outs:
                self._bpre.setdefault((q2, m, len(sig), nb), []).append((q, sig, upd))
            self._bkeys.setdefault((q, m, len(sig), nb), set()).add(sig[:nb])
        self._bhold = _holdable(b)
        self._missing_cache: dict = {}
        self.b_states = list(b.states)

    def is_final(self, c) -> bool:
        qa, qb = c
        return qa in self.a.finals and (qb == DEAD or qb not in self.b.finals)

    def final_controls(self):
        out = [(f, DEAD) for f in sorted(self.a.finals)]
        out += [(f, g) for f in sorted(self.a.finals) for g in self.b.states if g not in self.b.finals]
        return out

    def post(self, c, sig):
        qa, qb = c
        sa = tuple(None if s is None else s[0] for s in sig)
        res = []
        for m, qa2, ua in self._apost.get((qa, sa), ()):
            hit = None
            if qb != DEAD:
                sb = tuple(None if s is None else s[1] for s in sig)
                hit = self._bpost.get((qb, sb, m))
            if hit is None:
                res.append((m, (qa2, DEAD), tuple((x, WILD) for x in ua)))
            else:
                qb2, ub = hit
                res.append((m, (qa2, qb2), tuple(zip(ua, ub))))
        return res

    def _missing(self, qb, m, length, nb):
        """Minimal patterns over B-labels for which B has no transition."""
        key = (qb, m, length, nb)
        got = self._missing_cache.get(key)
        if got is not None:
            return got
        present = self._bkeys.get(key, set())
        pats: list = []
        if not present:
            pats.append((WILD,) * nb)
        else:
            def rec(prefix, cands):
                j = len(prefix)
                if j == nb:
                    return
                nxt = {}
                for c in cands:
                    nxt.setdefault(c[j], []).append(c)
                hold = self._bhold[j] if j < len(self._bhold) else []
                for s in hold:
                    if s not in nxt:
                        pats.append(prefix + (s,) + (WILD,) * (nb - j - 1))
                for s in sorted(nxt):
                    rec(prefix + (s,), nxt[s])
            rec((), present)
        self._missing_cache[key] = pats
        return pats

    def pre_entries(self, target):
        qa2, qb2 = target
        out = []
        for (qa, m, sa, ua) in self._apre.get(qa2, ()):
            n = len(sa)
            nb = sum(1 for s in sa if s is not None)
            if qb2 == DEAD:
                upd = tuple((x, WILD) for x in ua)
                # B already dead
                out.append(((qa, DEAD), m, tuple(None if x is None else (x, WILD) for x in sa), upd))
                # B dies on this step
                for qb in self.b_states:
                    for pat in self._missing(qb, m, n, nb):
                        sig = tuple(None if x is None else (x, pat[j]) for j, x in enumerate(sa))
                        out.append(((qa, qb), m, sig, upd))
            else:
                for (qb, sb, ub) in self._bpre.get((qb2, m, n, nb), ()):
                    if any((x is None) != (y is None) for x, y in zip(sa, sb)):
                        continue
                    sig = tuple(None if x is None else (x, y) for x, y in zip(sa, sb))
                    out.append(((qa, qb), m, sig, tuple(zip(ua, ub))))
        return out


# ------------------------------------------------------------ backward search

def _chain(labels):
    node = None
    for lab in reversed(labels):
        node = (lab, () if node is None else (node,))
    return node


def _insert(rest, node):
    if node is None:
        return rest
    return tuple(sorted(rest + (node,)))


def pre_forests(F: tuple, sig: tuple, upd: tuple, leq=label_leq) -> list:
    """Minimal forests G such that stepping with (sig -> upd) from G covers F."""
    i = len(sig) - 1
    p = 0
    while p <= i and sig[p] is not None:
        p += 1
    out = []
    out.append(F if p == 0 else _insert(F, _chain(sig[:p])))
    bad = object()

    def finish_at(t, m):
        if m >= p:
            return None if not t[1] else bad
        kids = t[1]
        if m + 1 < p:
            kids = _insert(kids, _chain(sig[m + 1:p]))
        return (sig[m], kids)

    def rec(forest, j):
        res = []
        prev = None
        for k, t in enumerate(forest):
            if t == prev:
                continue
            prev = t
            if not leq(t[0], upd[j]):
                continue
            rest = forest[:k] + forest[k + 1:]
            node = finish_at(t, j)
            if node is not bad:
                res.append(_insert(rest, node))
            if j < i:
                for newkids in rec(t[1], j + 1):
                    if j >= p:
                        if newkids:
                            continue
                        res.append(rest)
                    else:
                        res.append(_insert(rest, (sig[j], newkids)))
        return res

    out.extend(rec(F, 0))
    return out


class Basis:
    """Minimal elements of an upward-closed set, grouped by control state."""

    def __init__(self):
        self.by_control: dict = {}

    def covers(self, c, forest) -> bool:
        return any(embed_forest(h, forest) for h in self.by_control.get(c, ()))

    def add(self, c, forest) -> bool:
        lst = self.by_control.setdefault(c, [])
        for h in lst:
            if embed_forest(h, forest):
                return False
        lst[:] = [h for h in lst if not embed_forest(forest, h)]
        lst.append(forest)
        return True

    def contains(self, c, forest) -> bool:
        return forest in self.by_control.get(c, ())

    def elements(self):
        for c, lst in self.by_control.items():
            for f in lst:
                yield c, f

    def __len__(self):
        return sum(len(v) for v in self.by_control.values())


def backward_reach(system, budget: int = 10**6, stop_at_initial: bool = True, targets=None):
    """Basis of configurations that can reach a final control state.

    `targets` replaces the final control states by explicit (control, forest)
    pairs.  Returns (basis, initial_covered).
    """
    basis = Basis()
    work = deque()
    if targets is None:
        targets = [(f, ()) for f in system.final_controls()]
    for f, forest in targets:
        if basis.add(f, forest):
            work.append((f, forest))
    init = system.initial
    if basis.covers(init, ()) and stop_at_initial:
        return basis, True
    explored = 0
    while work:
        c2, F = work.popleft()
        if not basis.contains(c2, F):
            continue
        for (c, m, sig, upd) in system.pre_entries(c2):
            for G in pre_forests(F, sig, upd):
                explored += 1
                if explored > budget:
                    raise ResourceLimit(budget, explored)
                if basis.add(c, G):
                    if c == init and not G and stop_at_initial:
                        return basis, True
                    work.append((c, G))
    return basis, basis.covers(init, ())


def coverable(a: Wndcma, control, labels=(), budget: int = 10**5) -> bool:
    """Can a run reach `control` with a value chain labelled `labels` in memory?"""
    forest = () if not labels else (_chain(tuple(labels)),)
    _, covered = backward_reach(ExplicitSystem(a), budget, targets=[(control, forest)])
    return covered


def is_empty(a, budget: int = 10**6) -> bool:
    """True iff the automaton (or system) accepts no word."""
    system = a if not isinstance(a, Wndcma) else ExplicitSystem(a)
    _, covered = backward_reach(system, budget)
    return not covered


# ------------------------------------------------------------- forward search

def _choices(mem: dict, level: int, next_id: int):
    """Value chains a step may read: existing values and fresh descendants."""
    existing = sorted(mem, key=lambda c: (len(c), c))
    out = list(existing)
    anchors = [()] + [c for c in existing if len(c) <= level]
    for anc in anchors:
        for extra in range(1, level + 2 - len(anc)):
            out.append(anc + tuple(range(next_id, next_id + extra)))
    return out


def successors(system, control, mem: dict, next_id: int):
    """Yield (letter, chain, control', memory', next_id')."""
    for ch in _choices(mem, system.level, next_id):
        sig = tuple(mem.get(ch[:j + 1]) for j in range(len(ch)))
        entries = system.post(control, sig)
        if not entries:
            continue
        fresh = sum(1 for j in range(len(ch)) if ch[:j + 1] not in mem)
        for m, c2, upd in entries:
            mem2 = dict(mem)
            for j, s in enumerate(upd):
                mem2[ch[:j + 1]] = s
            yield m, ch, c2, mem2, next_id + fresh


def find_witness(a, max_len: int, budget: int = 10**6):
    """Shortest accepted word of length ≤ max_len, or None.

    Breadth-first search over concrete runs.  A new configuration is dropped
    when it embeds into one already seen at the same control state: the bigger
    one can replay every continuation of the smaller one at the same length.
    """
    system = a if not isinstance(a, Wndcma) else ExplicitSystem(a)
    init = system.initial
    if system.is_final(init):
        return DataWord((), (), ())
    seen: dict = {init: [()]}
    layer = [(init, {}, 0, ())]
    explored = 0
    for _ in range(max_len):
        nxt = []
        for control, mem, nid, word in layer:
            for m, ch, c2, mem2, nid2 in successors(system, control, mem, nid):
                explored += 1
                if explored > budget:
                    raise ResourceLimit(budget, explored)
                w2 = word + ((m, ch),)
                if system.is_final(c2):
                    return DataWord.from_chains([x for x, _ in w2], [y for _, y in w2])
                f = forest_from_memory(mem2)
                lst = seen.setdefault(c2, [])
                if any(embed_forest(f, g) for g in lst):
                    continue
                lst.append(f)
                nxt.append((c2, mem2, nid2, w2))
        layer = nxt
        if not layer:
            break
    return None
