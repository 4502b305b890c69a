"""Arenas and prearenas for RML types and sequents.

A move is identified by its owner (the context variable it belongs to, "" for
the right-hand side, "@" for the prearena's initial moves), a path of
constructor steps inside the owner's arena, and a payload.  Paths use the
steps "arg"/"res" for the two halves of an arrow arena and "rd", "wr", "rv",
"ok" for the read question, write question, read answer and write answer of
an intref arena.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from itertools import product

from .rml_lang.types import RmlType, TypeSequent

UNIT_VAL = "•"
INITIAL = "@"
RHS = ""


@total_ordering
@dataclass(frozen=True)
class Move:
    owner: str
    path: tuple = ()
    value: object = UNIT_VAL  # int, "•", or for initial moves a tuple of (name, value)
    tag: str = ""  # "", "src" or "tgt"

    def key(self):
        return (self.owner, self.path, str(self.value), self.tag)

    def __lt__(self, other):
        return self.key() < other.key()

    def untagged(self) -> "Move":
        return Move(self.owner, self.path, self.value) if self.tag else self

    def tagged(self, tag: str) -> "Move":
        return Move(self.owner, self.path, self.value, tag)

    def __str__(self):
        return move_text(self)

    def __repr__(self):
        return f"Move({move_text(self)!r})"


def move_text(m: Move) -> str:
    """Readable, injective rendering used by the text formats."""
    if m.owner == INITIAL:
        ints = [f"{n}={v}" for n, v in m.value if v != UNIT_VAL]
        s = "q0" + (f"<{','.join(ints)}>" if ints else "")
    elif m.owner == RHS:
        n = 0
        p = m.path
        while n < len(p) and p[n] == "res":
            n += 1
        rest = p[n:]
        if rest == ():
            s = f"a{n}"
        elif rest == ("arg",):
            s = f"q{n + 1}"
        else:
            s = f"a{n}." + ".".join(rest)
        if m.value != UNIT_VAL:
            s += f"={m.value}"
    else:
        s = m.owner + "".join("." + p for p in m.path)
        if m.value != UNIT_VAL:
            s += f"={m.value}"
    if m.tag:
        s += "!" + m.tag
    return s


@dataclass
class Arena:
    """Moves, initial moves, enabling and O/P, Q/A labelling.

    `label[m]` is a pair such as ("P", "A").
    """
    moves: list
    initials: list
    enables: dict = field(default_factory=dict)  # move -> list of enabled moves
    label: dict = field(default_factory=dict)

    def enablers(self) -> dict:
        back = {m: [] for m in self.moves}
        for m, ns in self.enables.items():
            for n in ns:
                back[n].append(m)
        return back


def _base_values(t: RmlType, k: int):
    return list(range(k)) if t.kind == "int" else [UNIT_VAL]


def _flip(lab):
    return ("O" if lab[0] == "P" else "P", lab[1])


def _arena_parts(t: RmlType, k: int, owner: str, prefix: tuple):
    """(moves, initials, enables, label) for the arena of t, with every path prefixed."""
    if t.is_base:
        ms = [Move(owner, prefix, v) for v in _base_values(t, k)]
        return ms, list(ms), {}, {m: ("P", "A") for m in ms}
    if t.kind == "intref":
        init = Move(owner, prefix)
        rd = Move(owner, prefix + ("rd",))
        wrs = [Move(owner, prefix + ("wr",), j) for j in range(k)]
        rvs = [Move(owner, prefix + ("rv",), j) for j in range(k)]
        ok = Move(owner, prefix + ("ok",))
        moves = [init, rd, *wrs, *rvs, ok]
        en = {init: [rd, *wrs], rd: list(rvs)}
        for w in wrs:
            en[w] = [ok]
        lab = {init: ("P", "A"), rd: ("O", "Q"), ok: ("P", "A")}
        lab.update({w: ("O", "Q") for w in wrs})
        lab.update({r: ("P", "A") for r in rvs})
        return moves, [init], en, lab
    # A ⇒ B
    am, ai, ae, al = _arena_parts(t.dom, k, owner, prefix + ("arg",))
    bm, bi, be, bl = _arena_parts(t.cod, k, owner, prefix + ("res",))
    top = Move(owner, prefix)
    moves = [top, *am, *bm]
    en = {top: list(ai)}
    lab = {top: ("P", "A")}
    for m in am:
        lab[m] = ("O", "Q") if m in ai else _flip(al[m])
    lab.update(bl)
    for m, ns in ae.items():
        en.setdefault(m, []).extend(ns)
    for m, ns in be.items():
        en.setdefault(m, []).extend(ns)
    for a in ai:
        en.setdefault(a, []).extend(bi)
    return moves, [top], en, lab


def arena_of_type(t: RmlType, k: int = 3, owner: str = RHS) -> Arena:
    moves, inits, en, lab = _arena_parts(t, k, owner, ())
    return Arena(moves, inits, en, lab)


def prearena_of_sequent(seq: TypeSequent, k: int = 3) -> Arena:
    """⟦θ1⟧ ⊗ … ⊗ ⟦θn⟧ → ⟦θ⟧ with initial moves tupled in context order."""
    ctx = [(n, arena_of_type(t, k, owner=n)) for n, t in seq.context]
    rhs = arena_of_type(seq.subject, k)
    combos = list(product(*[[(n, m.value) for m in a.initials] for n, a in ctx]))
    inits = [Move(INITIAL, (), tuple(c)) for c in combos]
    moves = list(inits)
    en: dict = {}
    lab = {m: ("O", "Q") for m in inits}
    ctx_initials = []
    for _, a in ctx:
        ctx_initials.extend(a.initials)
        for m in a.moves:
            if m in a.initials:
                continue
            moves.append(m)
            lab[m] = _flip(a.label[m])
            for n in a.enables.get(m, []):
                en.setdefault(m, []).append(n)
        # enabled by an initial of the component arena: now enabled by every tuple
        for i0 in a.initials:
            for n in a.enables.get(i0, []):
                for q in inits:
                    en.setdefault(q, []).append(n)
    for m in rhs.moves:
        moves.append(m)
        lab[m] = rhs.label[m]
        for n in rhs.enables.get(m, []):
            en.setdefault(m, []).append(n)
    for q in inits:
        en.setdefault(q, []).extend(rhs.initials)
    return Arena(moves, inits, en, lab)


def is_pstrict(p: Arena) -> bool:
    """No enabling chain (of length ≥ 1) runs from a P-question to a P-question."""
    pq = [m for m in p.moves if p.label[m] == ("P", "Q")]
    pqs = set(pq)
    for start in pq:
        seen = set()
        stack = list(p.enables.get(start, []))
        while stack:
            m = stack.pop()
            if m in seen:
                continue
            seen.add(m)
            if m in pqs:
                return False
            stack.extend(p.enables.get(m, []))
    return True


def question_depth(p: Arena) -> int:
    """Longest enabling chain counted in questions, minus one."""
    memo: dict = {}

    def depth(m):
        if m in memo:
            return memo[m]
        memo[m] = 0
        best = 0
        for n in p.enables.get(m, []):
            best = max(best, depth(n))
        memo[m] = best + (1 if p.label[m][1] == "Q" else 0)
        return memo[m]

    return max(depth(i) for i in p.initials) - 1


def justifier_candidates(p: Arena) -> dict:
    return p.enablers()


def dump_arena(p: Arena) -> str:
    """Graphviz text of the enabling relation."""
    lines = ["digraph prearena {"]
    ids = {m: f"m{i}" for i, m in enumerate(sorted(p.moves))}
    for m in sorted(p.moves):
        o, q = p.label[m]
        shape = "box" if m in p.initials else "ellipse"
        lines.append(f'  {ids[m]} [label="{move_text(m)} {o}{q}", shape={shape}];')
    for m in sorted(p.moves):
        for n in sorted(p.enables.get(m, [])):
            lines.append(f"  {ids[m]} -> {ids[n]};")
    lines.append("}")
    return "\n".join(lines)
