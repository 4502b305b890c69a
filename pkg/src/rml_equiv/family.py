"""Automaton families, the inductive invariants, merging and cleanup."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .ndcma import AutomatonBuilder, Wndcma, check_level_discipline, format_name, is_deterministic

_ids = itertools.count()


class CompileError(Exception):
    """Internal invariant failure during compilation (a compiler bug)."""


class FragmentViolation(Exception):
    pass


@dataclass
class Piece:
    """Mutable automaton under construction; states are global ints."""
    level: int = 0
    init: int = -1
    sec: int = -1
    finals: set = field(default_factory=set)
    trans: dict = field(default_factory=dict)  # (q, m, sig) -> (q2, upd)
    names: dict = field(default_factory=dict)
    alphabet: set = field(default_factory=set)

    def state(self, name) -> int:
        q = next(_ids)
        self.names[q] = name
        return q

    def add(self, q, m, sig, q2, upd):
        sig, upd = tuple(sig), tuple(upd)
        assert len(sig) == len(upd), (sig, upd)
        key = (q, m, sig)
        old = self.trans.get(key)
        if old is not None and old != (q2, upd):
            raise CompileError(
                f"nondeterminism at {self.names.get(q)} on {m} {sig}: "
                f"{self.names.get(old[0])} vs {self.names.get(q2)}")
        self.trans[key] = (q2, upd)
        self.level = max(self.level, len(sig) - 1)
        self.alphabet.add(m)

    def absorb(self, other: "Piece", skip_init=True):
        """Copy the states and transitions of another piece (ids are disjoint)."""
        self.names.update(other.names)
        self.alphabet |= other.alphabet
        for (q, m, sig), (q2, upd) in other.trans.items():
            if skip_init and q == other.init:
                continue
            self.add(q, m, sig, q2, upd)

    def out(self) -> dict:
        res: dict = {}
        for (q, m, sig), (q2, upd) in self.trans.items():
            res.setdefault(q, []).append((m, sig, q2, upd))
        return res

    def init_transition(self):
        ts = [(m, sig, q2, upd) for (q, m, sig), (q2, upd) in self.trans.items() if q == self.init]
        if len(ts) != 1:
            raise CompileError(f"expected one initial transition, found {len(ts)}")
        return ts[0]

    def copy(self, suffix: str) -> tuple["Piece", dict]:
        """Fresh copy; returns (piece, old-id -> new-id)."""
        ren = {}
        p = Piece(level=self.level, alphabet=set(self.alphabet))
        for q, n in self.names.items():
            ren[q] = p.state((n, suffix) if suffix else n)
        p.init, p.sec = ren[self.init], ren.get(self.sec, -1)
        p.finals = {ren[f] for f in self.finals}
        for (q, m, sig), (q2, upd) in self.trans.items():
            p.add(ren[q], m, tuple(None if s is None else ren[s] for s in sig),
                  ren[q2], tuple(ren[s] for s in upd))
        return p, ren

    def to_wndcma(self, alphabet=None) -> Wndcma:
        order = sorted(self.names)
        ren = {q: i for i, q in enumerate(order)}
        b = AutomatonBuilder(self.level, alphabet if alphabet is not None else self.alphabet)
        b.names = [self.names[q] for q in order]
        b.initial = ren[self.init]
        b.finals = {ren[f] for f in self.finals}
        for (q, m, sig), (q2, upd) in self.trans.items():
            b.add(ren[q], m, tuple(None if s is None else ren[s] for s in sig),
                  ren[q2], tuple(ren[s] for s in upd))
        return b.build()


def final_closure(p: Piece):
    """Give all non-initial final states the same outgoing transitions."""
    fins = sorted(f for f in p.finals if f != p.init)
    if len(fins) < 2:
        return
    union: dict = {}
    for (q, m, sig), res in list(p.trans.items()):
        if q in p.finals and q != p.init:
            old = union.get((m, sig))
            if old is not None and old != res:
                raise CompileError(f"final states disagree on {m} {sig}")
            union[(m, sig)] = res
    for f in fins:
        for (m, sig), (q2, upd) in union.items():
            p.add(f, m, sig, q2, upd)


def prune(p: Piece) -> Piece:
    """Drop transitions that can never fire or never lead to acceptance.

    Forward: a transition is usable when its source is reachable and every
    state it reads can have been written at that slot.  Backward: keep only
    states from which a final state is reachable in the control graph.
    """
    reach = {p.init}
    held: set = set()
    usable: list = []
    items = list(p.trans.items())
    changed = True
    used = set()
    while changed:
        changed = False
        for idx, ((q, m, sig), (q2, upd)) in enumerate(items):
            if idx in used or q not in reach:
                continue
            if any(s is not None and (j, s) not in held for j, s in enumerate(sig)):
                continue
            used.add(idx)
            usable.append(idx)
            changed = True
            reach.add(q2)
            for j, s in enumerate(upd):
                held.add((j, s))
    back: dict = {}
    for idx in usable:
        (q, m, sig), (q2, upd) = items[idx]
        back.setdefault(q2, set()).add(q)
    live = {f for f in p.finals if f in reach}
    stack = list(live)
    while stack:
        q = stack.pop()
        for r in back.get(q, ()):
            if r not in live:
                live.add(r)
                stack.append(r)
    out = Piece(level=0, init=p.init, sec=p.sec, alphabet=set(p.alphabet))
    for idx in usable:
        (q, m, sig), (q2, upd) = items[idx]
        # the initial transition is kept even when the rest is dead
        if (q in live and q2 in live) or q == p.init:
            out.add(q, m, sig, q2, upd)
    keep = {p.init} | {q for (q, _, _) in out.trans} | {v[0] for v in out.trans.values()}
    for (q, m, sig), (q2, upd) in out.trans.items():
        keep |= {s for s in sig if s is not None} | set(upd)
    out.names = {q: p.names[q] for q in keep}
    out.finals = {f for f in p.finals if f in keep}
    out.level = max(p.level, out.level) if out.trans else p.level
    return out


# ------------------------------------------------------------- invariants

@dataclass
class InvariantReport:
    no_initial_revisit: bool
    deterministic: bool
    level_discipline: bool
    unique_initial_transition: bool
    final_uniformity: bool
    details: list

    @property
    def ok(self) -> bool:
        return all([self.no_initial_revisit, self.deterministic, self.level_discipline,
                    self.unique_initial_transition, self.final_uniformity])


def check_invariants(a: Wndcma) -> InvariantReport:
    det = []
    q0 = a.initial
    revisit = True
    for q, m, sig, q2, upd in a.entries():
        if q2 == q0 or q0 in upd:
            revisit = False
            det.append(f"initial state revisited via {m}")
            break
    deterministic = is_deterministic(a)
    lv = check_level_discipline(a)
    if not lv.ok:
        det.append(f"level violations: {lv.violations[:3]}")
    init_ts = [(m, sig) for (q, m, sig) in a.delta if q == q0]
    bot_ts = [(q, m) for (q, m, sig) in a.delta if sig == (None,)]
    unique = (len(init_ts) == 1 and init_ts[0][1] == (None,) and len(bot_ts) == 1)
    if not unique:
        det.append(f"initial transitions {init_ts}, (⊥)-transitions {len(bot_ts)}")
    outs: dict = {}
    for (q, m, sig), res in a.delta.items():
        if q in a.finals and q != q0:
            outs.setdefault(q, {})[(m, sig)] = res
    fins = [f for f in a.finals if f != q0]
    uniform = True
    if fins:
        ref = outs.get(fins[0], {})
        for f in fins[1:]:
            if outs.get(f, {}) != ref:
                uniform = False
                det.append(f"final states {a.state_name(fins[0])} and {a.state_name(f)} differ")
                break
    return InvariantReport(revisit, deterministic, lv.ok, unique, uniform, det)


# ---------------------------------------------------------------- families

@dataclass
class AutomatonFamily:
    members: dict  # initial move -> Wndcma
    alphabet: frozenset
    level: int


def merge_family(fam: AutomatonFamily) -> Wndcma:
    """One automaton: union of the members with their initial states merged."""
    b = AutomatonBuilder(fam.level, fam.alphabet)
    q0 = b.state("init")
    b.initial = q0
    accept_empty = False
    for gamma in sorted(fam.members):
        a = fam.members[gamma]
        ren = {}
        for q in a.states:
            if q == a.initial:
                ren[q] = q0
            else:
                ren[q] = b.fresh(a.names[q])
        if a.initial in a.finals:
            accept_empty = True
        b.finals |= {ren[f] for f in a.finals if f != a.initial}
        for q, m, sig, q2, upd in a.entries():
            b.add(ren[q], m, tuple(None if s is None else ren[s] for s in sig),
                  ren[q2], tuple(ren[s] for s in upd))
    if accept_empty or not fam.members:
        b.finals.add(q0)
    return b.build()


def cleanup(a: Wndcma, exact: bool = True, limit: int = 600) -> Wndcma:
    """Remove unreachable and dead states and transitions, renumbering states.

    The cheap pass tracks which states can ever sit at each memory slot.  The
    exact pass (for automata with at most `limit` transitions) also asks the
    coverability engine whether each transition's source configuration is
    reachable at all.  States are renumbered in breadth-first order from the
    initial state so the result is stable across runs.
    """
    a = _cleanup_once(a)
    if not exact or a.n_transitions() > limit:
        return share_states(a)
    from .coverability import ResourceLimit, coverable
    keep = {}
    seen: dict = {}
    for (q, m, sig), outs in a.delta.items():
        labels = tuple(s for s in sig if s is not None)
        key = (q, labels)
        if key not in seen:
            try:
                seen[key] = coverable(a, q, labels, budget=20_000)
            except ResourceLimit:
                seen[key] = True
        if seen[key]:
            keep[(q, m, sig)] = outs
    if len(keep) < len(a.delta):
        a = _cleanup_once(Wndcma(a.level, a.alphabet, a.names, a.initial, a.finals, keep))
    return share_states(a)


def _stem(name) -> str:
    return re.sub(r"[()]|;\d+|#\d+", "", format_name(name))


def share_states(a: Wndcma) -> Wndcma:
    """Let memory-only states borrow the identity of control-only states.

    Control states and the memory slots of each level are separate namespaces,
    so renaming a state that is only ever stored at one level to a state that
    is only ever a (non-initial) control state changes nothing observable.
    Pairs with matching name stems are preferred.
    """
    control = {a.initial}
    levels: dict = {}
    for (q, m, sig), outs in a.delta.items():
        control.add(q)
        for j, x in enumerate(sig):
            if x is not None:
                levels.setdefault(x, set()).add(j)
        for q2, upd in outs:
            control.add(q2)
            for j, x in enumerate(upd):
                levels.setdefault(x, set()).add(j)
    stored = sorted((q for q in levels if q not in control and len(levels[q]) == 1),
                    key=lambda q: (min(levels[q]), q))
    free = [q for q in sorted(control) if q != a.initial and q not in levels]
    ren = {}
    for exact in (True, False):
        for x in stored:
            if x in ren:
                continue
            cands = [y for y in free if not exact or _stem(a.names[y]) == _stem(a.names[x])]
            if cands:
                free.remove(cands[0])
                ren[x] = cands[0]
    if not ren:
        return a
    delta = {}
    for (q, m, sig), outs in a.delta.items():
        key = (q, m, tuple(ren.get(x, x) for x in sig))
        delta[key] = frozenset((q2, tuple(ren.get(x, x) for x in upd)) for q2, upd in outs)
    return _cleanup_once(Wndcma(a.level, a.alphabet, a.names, a.initial, a.finals, delta))


def _cleanup_once(a: Wndcma) -> Wndcma:
    p = Piece()
    ids = {}
    for q in a.states:
        ids[q] = q
    p.names = dict(enumerate(a.names))
    p.init = a.initial
    p.finals = set(a.finals)
    for q, m, sig, q2, upd in a.entries():
        p.add(q, m, sig, q2, upd)
    p.level = a.level
    p = prune(p)
    return renumber(p, a.alphabet, a.level)


def renumber(p: Piece, alphabet, level) -> Wndcma:
    out = p.out()
    order = [p.init]
    seen = {p.init}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for m, sig, q2, upd in sorted(out.get(q, ()), key=lambda e: (str(e[0]), str(e[1]))):
            for s in [q2, *upd]:
                if s not in seen:
                    seen.add(s)
                    order.append(s)
    for q in sorted(p.names):
        if q not in seen:
            order.append(q)
    ren = {q: j for j, q in enumerate(order)}
    b = AutomatonBuilder(level, alphabet)
    b.names = [p.names[q] for q in order]
    b.initial = ren[p.init]
    b.finals = {ren[f] for f in p.finals if f in ren}
    for (q, m, sig), (q2, upd) in p.trans.items():
        b.add(ren[q], m, tuple(None if s is None else ren[s] for s in sig),
              ren[q2], tuple(ren[s] for s in upd))
    return b.build()
