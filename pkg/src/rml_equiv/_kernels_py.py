"""Forest kernels for abstract configurations (pure Python implementation).

A forest is a sorted tuple of trees; a tree is (label, children-forest).
Labels are ints, or tuples of ints where -1 is a wildcard that lies below
every concrete component.
"""

WILD = -1

_cache = {}


def label_leq(a, b):
    if a == b:
        return True
    if type(a) is tuple:
        for x, y in zip(a, b):
            if x != WILD and x != y:
                return False
        return True
    return False


def forest_from_memory(mem):
    """Canonical forest of a memory {chain: label}."""
    kids = {}
    for ch in mem:
        kids.setdefault(ch[:-1], []).append(ch)

    def build(ch):
        return (mem[ch], tuple(sorted([build(c) for c in kids.get(ch, ())])))

    return tuple(sorted([build(c) for c in kids.get((), ())]))


def forest_size(f):
    n = 0
    for lab, ch in f:
        n += 1 + forest_size(ch)
    return n


def tree_embeds(t1, t2):
    if t1 is t2:
        return True
    key = (t1, t2)
    r = _cache.get(key)
    if r is None:
        r = label_leq(t1[0], t2[0]) and embed_forest(t1[1], t2[1])
        if len(_cache) > 500000:
            _cache.clear()
        _cache[key] = r
    return r


def embed_forest(f1, f2):
    """Injective, label-respecting, parent-preserving embedding of f1 into f2."""
    n1 = len(f1)
    if n1 == 0:
        return True
    n2 = len(f2)
    if n1 > n2:
        return False
    adj = []
    for t1 in f1:
        row = [j for j in range(n2) if tree_embeds(t1, f2[j])]
        if not row:
            return False
        adj.append(row)
    match = [-1] * n2

    def augment(i, seen):
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match[j] == -1 or augment(match[j], seen):
                match[j] = i
                return True
        return False

    for i in range(n1):
        if not augment(i, [False] * n2):
            return False
    return True
