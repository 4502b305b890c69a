"""Weak nested data class memory automata.

A configuration is a control state plus a class memory: a finite map from
nested data values to states.  Data values are written as chains of ids from
a level-0 value down to the value itself, so the parent of (3, 7) is (3,).

Transition tables are one dict for all levels:
    (state, letter, sig) -> frozenset of (target, upd)
where sig is a tuple of length level+1 holding states or None (⊥), and upd
has the same length and holds states.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

BOT = None


class NotDeterministic(Exception):
    pass


class AlphabetMismatch(Exception):
    pass


@dataclass(frozen=True)
class Wndcma:
    level: int
    alphabet: frozenset
    names: tuple  # state id -> printable name
    initial: int
    finals: frozenset
    delta: dict = field(hash=False, compare=False)

    @property
    def states(self) -> range:
        return range(len(self.names))

    def entries(self) -> Iterable[tuple]:
        """(q, letter, sig, q2, upd) for every transition, in a stable order."""
        for (q, m, sig) in sorted(self.delta, key=_entry_key):
            for q2, upd in sorted(self.delta[(q, m, sig)]):
                yield q, m, sig, q2, upd

    def n_transitions(self) -> int:
        return sum(len(v) for v in self.delta.values())

    def index_by_sig(self) -> dict:
        """(q, sig) -> list of (letter, target, upd); used by forward exploration."""
        idx: dict = {}
        for (q, m, sig), outs in self.delta.items():
            lst = idx.setdefault((q, sig), [])
            for q2, upd in outs:
                lst.append((m, q2, upd))
        for lst in idx.values():
            lst.sort(key=lambda e: (_letter_key(e[0]), e[1], e[2]))
        return idx

    def state_name(self, q) -> str:
        if q is None:
            return "⊥"
        return format_name(self.names[q])

    def with_finals(self, finals) -> "Wndcma":
        return Wndcma(self.level, self.alphabet, self.names, self.initial,
                      frozenset(finals), self.delta)


def format_name(n) -> str:
    """State names print without commas so signatures stay parseable."""
    if isinstance(n, tuple):
        return "(" + ";".join(format_name(x) for x in n) + ")"
    return str(n)


def _letter_key(m):
    return m.key() if hasattr(m, "key") else (str(m),)


def _sig_key(sig):
    return tuple(-1 if s is None else s for s in sig)


def _entry_key(k):
    q, m, sig = k
    return (q, len(sig), _letter_key(m), _sig_key(sig))


class AutomatonBuilder:
    """Mutable helper for assembling an automaton with named states."""

    def __init__(self, level: int, alphabet=()):
        self.level = level
        self.alphabet = set(alphabet)
        self.ids: dict = {}
        self.names: list = []
        self.delta: dict = {}
        self.finals: set = set()
        self.initial = None

    def state(self, name) -> int:
        q = self.ids.get(name)
        if q is None:
            q = len(self.names)
            self.ids[name] = q
            self.names.append(name)
        return q

    def fresh(self, name) -> int:
        """A new state even if the name is already taken."""
        self.names.append(name)
        return len(self.names) - 1

    def add(self, q, letter, sig, q2, upd):
        sig, upd = tuple(sig), tuple(upd)
        if len(sig) != len(upd) or len(sig) > self.level + 1:
            raise ValueError(f"bad signature/update lengths {sig} {upd}")
        self.alphabet.add(letter)
        self.delta.setdefault((q, letter, sig), set()).add((q2, upd))

    def build(self) -> Wndcma:
        return Wndcma(self.level, frozenset(self.alphabet), tuple(self.names), self.initial,
                      frozenset(self.finals),
                      {k: frozenset(v) for k, v in self.delta.items()})


# ---------------------------------------------------------------- data words

@dataclass(frozen=True)
class DataWord:
    """Letters with value ids; parents maps every id to its parent id or None."""
    letters: tuple
    ids: tuple
    parents: tuple  # tuple of (id, parent) pairs, sorted by id

    def __len__(self):
        return len(self.letters)

    def parent_map(self) -> dict:
        return dict(self.parents)

    def chain(self, d) -> tuple:
        pm = self.parent_map()
        out = [d]
        while pm[out[-1]] is not None:
            out.append(pm[out[-1]])
        return tuple(reversed(out))

    def chains(self) -> list:
        pm = self.parent_map()
        res = []
        for d in self.ids:
            out = [d]
            while pm[out[-1]] is not None:
                out.append(pm[out[-1]])
            res.append(tuple(reversed(out)))
        return res

    def level_of(self, d) -> int:
        return len(self.chain(d)) - 1

    @staticmethod
    def from_chains(letters, chains) -> "DataWord":
        """Build a canonical word from (letter, chain-of-arbitrary-ids) pairs."""
        ren: dict = {}
        parents: dict = {}
        ids = []
        for ch in chains:
            prev = None
            for j in range(len(ch)):
                key = ch[:j + 1]
                if key not in ren:
                    ren[key] = len(ren)
                    parents[ren[key]] = prev
                prev = ren[key]
            ids.append(ren[tuple(ch)])
        return DataWord(tuple(letters), tuple(ids), tuple(sorted(parents.items())))

    def canonical(self) -> "DataWord":
        return DataWord.from_chains(self.letters, self.chains())

    def text(self) -> str:
        pm = self.parent_map()
        toks = []
        for m, d in zip(self.letters, self.ids):
            p = pm[d]
            toks.append(f"{m}@{d}" + (f"({p})" if p is not None else ""))
        return " ".join(toks) if toks else "ε"

    def __str__(self):
        return self.text()

    @staticmethod
    def parse(text: str, alphabet) -> "DataWord":
        table = {str(m): m for m in alphabet}
        text = text.strip()
        if text in ("", "ε"):
            return DataWord((), (), ())
        letters, ids, parents = [], [], {}
        for tok in text.split():
            lhs, _, rest = tok.rpartition("@")
            if not lhs or lhs not in table:
                raise ValueError(f"unknown letter in {tok!r}")
            if "(" in rest:
                d, p = rest.rstrip(")").split("(")
                d, p = int(d), int(p)
            else:
                d, p = int(rest), None
            if d in parents and parents[d] != p and p is not None:
                raise ValueError(f"inconsistent parent for value {d}")
            if p is not None and p not in parents:
                parents[p] = None
            parents[d] = p if p is not None else parents.get(d)
            letters.append(table[lhs])
            ids.append(d)
        return DataWord(tuple(letters), tuple(ids), tuple(sorted(parents.items())))


# ------------------------------------------------------------- configurations

@dataclass(frozen=True)
class Configuration:
    state: int
    memory: tuple  # sorted tuple of (chain, state)

    def mem(self) -> dict:
        return dict(self.memory)

    @staticmethod
    def initial(a: Wndcma) -> "Configuration":
        return Configuration(a.initial, ())


def _apply(c: Configuration, chain, q2, upd) -> Configuration:
    mem = dict(c.memory)
    for j, s in enumerate(upd):
        mem[chain[:j + 1]] = s
    return Configuration(q2, tuple(sorted(mem.items())))


def step(a: Wndcma, c: Configuration, letter, chain) -> set:
    """All configurations reachable by reading `letter` on the value `chain`."""
    if letter not in a.alphabet or len(chain) > a.level + 1:
        return set()
    mem = dict(c.memory)
    sig = tuple(mem.get(chain[:j + 1]) for j in range(len(chain)))
    outs = a.delta.get((c.state, letter, sig), ())
    return {_apply(c, chain, q2, upd) for q2, upd in outs}


def run(a: Wndcma, w: DataWord) -> set:
    confs = {Configuration.initial(a)}
    for m, ch in zip(w.letters, w.chains()):
        nxt = set()
        for c in confs:
            nxt |= step(a, c, m, ch)
        confs = nxt
        if not confs:
            break
    return confs


def accepts(a: Wndcma, w: DataWord) -> bool:
    return any(c.state in a.finals for c in run(a, w))


def is_deterministic(a: Wndcma) -> bool:
    return all(len(v) == 1 for v in a.delta.values())


# ------------------------------------------------------------ enumeration

def canonical_words(alphabet, level: int, max_len: int):
    """All canonical data words of length ≤ max_len (shortest first)."""
    letters = sorted(alphabet, key=_letter_key)
    frontier = [((), (), {})]  # letters, chains, depth-of-id
    yield DataWord((), (), ())
    for _ in range(max_len):
        nxt = []
        for ls, chs, known in frontier:
            for ch in _value_choices(chs, known, level):
                for m in letters:
                    nls, nchs = ls + (m,), chs + (ch,)
                    nk = known if ch in known else {**known, **{ch[:j + 1]: j for j in range(len(ch))}}
                    nxt.append((nls, nchs, nk))
                    yield DataWord.from_chains(nls, nchs)
        frontier = nxt


def _value_choices(chs, known, level):
    """Existing values, and fresh values hanging below an existing value or nothing."""
    out = list(dict.fromkeys(k for k in sorted(known, key=lambda c: (len(c), c))))
    counter = itertools.count(1 + max((i for k in known for i in k), default=0))
    anchors = [()] + [k for k in out if len(k) <= level]
    for anc in anchors:
        for extra in range(1, level + 2 - len(anc)):
            out.append(anc + tuple(next(counter) for _ in range(extra)))
    return out


def accepted_words(a: Wndcma, max_len: int) -> set:
    """All canonical accepted words of length ≤ max_len, found by exploring runs.

    Much cheaper than filtering `canonical_words`, since only letters and
    values enabled by some transition are tried.
    """
    by_state: dict = {}
    for (q, m, sig), outs in a.delta.items():
        by_state.setdefault(q, []).append((m, sig, outs))
    found: set = set()

    def go(q, mem, letters, chains, nid):
        if q in a.finals:
            found.add(DataWord.from_chains(letters, chains))
        if len(letters) == max_len:
            return
        for m, sig, outs in by_state.get(q, ()):
            for ch, fresh in _matching_chains(mem, sig, nid):
                for q2, upd in outs:
                    mem2 = dict(mem)
                    for j, s in enumerate(upd):
                        mem2[ch[:j + 1]] = s
                    go(q2, mem2, letters + (m,), chains + (ch,), nid + fresh)

    go(a.initial, {}, (), (), 0)
    return found


def _matching_chains(mem: dict, sig, nid):
    """Chains whose stored states match sig; a trailing ⊥ means a fresh value."""
    if sig[-1] is None:
        if any(s is None for s in sig[:-1]):
            return []
        parents = [()] if len(sig) == 1 else [c for c, s in mem.items()
                                              if len(c) == len(sig) - 1 and s == sig[-2]
                                              and all(mem.get(c[:j + 1]) == sig[j] for j in range(len(c)))]
        return [(p + (nid,), 1) for p in parents]
    return [(c, 0) for c, s in mem.items()
            if len(c) == len(sig) and all(mem.get(c[:j + 1]) == sig[j] for j in range(len(c)))]


# ------------------------------------------------------- closure operations

def valid_sigs(states, i: int):
    """Signatures of length i+1: a prefix of states followed by ⊥s."""
    states = list(states)
    for p in range(i + 2):
        for pre in itertools.product(states, repeat=p):
            yield pre + (BOT,) * (i + 1 - p)


def pad_level(a: Wndcma, level: int) -> Wndcma:
    if level < a.level:
        raise ValueError("cannot lower the level")
    return Wndcma(level, a.alphabet, a.names, a.initial, a.finals, a.delta)


def complete(a: Wndcma) -> Wndcma:
    """Add a non-final sink so every (state, letter, signature) has one image."""
    if not is_deterministic(a):
        raise NotDeterministic("complete() needs a deterministic automaton")
    names = a.names + ("sink",)
    sink = len(a.names)
    delta = dict(a.delta)
    allq = list(range(len(names)))
    for q in allq:
        for m in a.alphabet:
            for i in range(a.level + 1):
                for sig in valid_sigs(allq, i):
                    if (q, m, sig) not in delta:
                        delta[(q, m, sig)] = frozenset({(sink, (sink,) * (i + 1))})
    return Wndcma(a.level, a.alphabet, names, a.initial, a.finals, delta)


def complement(a: Wndcma) -> Wndcma:
    c = complete(a)
    return c.with_finals(set(c.states) - set(a.finals))


def _product(a: Wndcma, b: Wndcma, accept) -> Wndcma:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("automata over different alphabets")
    lvl = max(a.level, b.level)
    pairs: dict = {}
    names: list = []

    def pid(p, q):
        if (p, q) not in pairs:
            pairs[(p, q)] = len(names)
            names.append((a.names[p], b.names[q]))
        return pairs[(p, q)]

    by_a: dict = {}
    for (q, m, sig), outs in a.delta.items():
        by_a.setdefault((m, tuple(s is None for s in sig)), []).append((q, sig, outs))
    delta: dict = {}
    init = pid(a.initial, b.initial)
    for (q, m, sig), outs in b.delta.items():
        for (p, sa, oa) in by_a.get((m, tuple(s is None for s in sig)), ()):
            psig = tuple(None if x is None else pid(x, y) for x, y in zip(sa, sig))
            res = set()
            for (p2, ua) in oa:
                for (q2, ub) in outs:
                    res.add((pid(p2, q2), tuple(pid(x, y) for x, y in zip(ua, ub))))
            delta[(pid(p, q), m, psig)] = frozenset(res)
    finals = {i for (p, q), i in pairs.items() if accept(p in a.finals, q in b.finals)}
    return Wndcma(lvl, a.alphabet, tuple(names), init, frozenset(finals), delta)


def intersect(a: Wndcma, b: Wndcma) -> Wndcma:
    return _product(a, b, lambda x, y: x and y)


def union(a: Wndcma, b: Wndcma) -> Wndcma:
    lvl = max(a.level, b.level)
    ca = complete(pad_level(a, lvl)) if is_deterministic(a) else None
    cb = complete(pad_level(b, lvl)) if is_deterministic(b) else None
    if ca is None or cb is None:
        return _disjoint_union(pad_level(a, lvl), pad_level(b, lvl))
    return _product(ca, cb, lambda x, y: x or y)


def _disjoint_union(a: Wndcma, b: Wndcma) -> Wndcma:
    # nondeterministic fallback: fresh initial state branching into both
    off = len(a.names) + 1
    names = ("init",) + tuple(("L", n) for n in a.names) + tuple(("R", n) for n in b.names)
    delta: dict = {}

    def shift(x, o):
        return None if x is None else x + o

    for src, o in ((a, 1), (b, off)):
        for (q, m, sig), outs in src.delta.items():
            key = (q + o, m, tuple(shift(s, o) for s in sig))
            delta[key] = frozenset((q2 + o, tuple(u + o for u in upd)) for q2, upd in outs)
            if q == src.initial:
                k0 = (0, m, key[2])
                delta[k0] = delta.get(k0, frozenset()) | delta[key]
    finals = {f + 1 for f in a.finals} | {f + off for f in b.finals}
    if a.initial in a.finals or b.initial in b.finals:
        finals.add(0)
    return Wndcma(a.level, a.alphabet | b.alphabet, names, 0, frozenset(finals), delta)


# --------------------------------------------------------- level discipline

@dataclass
class LevelReport:
    ok: bool
    levels: dict  # state -> set of slot indices
    violations: list

    def level_map(self) -> dict:
        return {q: min(ls) for q, ls in self.levels.items()}


def check_level_discipline(a: Wndcma) -> LevelReport:
    levels: dict = {}
    for (q, m, sig), outs in a.delta.items():
        for j, s in enumerate(sig):
            if s is not None:
                levels.setdefault(s, set()).add(j)
        for _, upd in outs:
            for j, s in enumerate(upd):
                levels.setdefault(s, set()).add(j)
    bad = sorted((q, sorted(ls)) for q, ls in levels.items() if len(ls) > 1)
    return LevelReport(not bad, levels, bad)


# ----------------------------------------------------------- text format

def display_names(a: Wndcma) -> list:
    """State names made unique (a "#id" suffix is added to repeated names)."""
    raw = [a.state_name(q) for q in a.states]
    counts: dict = {}
    for n in raw:
        counts[n] = counts.get(n, 0) + 1
    return [n if counts[n] == 1 else f"{n}#{q}" for q, n in enumerate(raw)]


def to_text(a: Wndcma) -> str:
    names = display_names(a)

    def nm(q):
        return "⊥" if q is None else names[q]

    lines = [f"level {a.level}",
             f"initial {nm(a.initial)}",
             "finals " + " ".join(sorted(nm(f) for f in a.finals))]
    for q, m, sig, q2, upd in a.entries():
        s = ",".join(nm(x) for x in sig)
        u = ",".join(nm(x) for x in upd)
        lines.append(f"{nm(q)} --{m}, ({s}) -> {nm(q2)}, ({u})")
    return "\n".join(lines) + "\n"


def from_text(text: str, alphabet) -> Wndcma:
    """Inverse of to_text (state names are kept as strings)."""
    table = {str(m): m for m in alphabet}
    b = None
    init = None
    finals = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("level "):
            b = AutomatonBuilder(int(line.split()[1]), alphabet)
        elif line.startswith("initial "):
            init = line.split(None, 1)[1]
        elif line.startswith("finals"):
            finals = line.split()[1:]
        else:
            src, rest = line.split(" --", 1)
            head, tail = rest.split(" -> ")
            letter, sig = head.rsplit(", (", 1)
            tgt, upd = tail.rsplit(", (", 1)

            def states(s):
                s = s.rstrip(")")
                return tuple(None if x == "⊥" else b.state(x) for x in s.split(","))
            b.add(b.state(src), table[letter], states(sig), b.state(tgt), states(upd))
    b.initial = b.state(init)
    b.finals = {b.state(f) for f in finals}
    return b.build()
