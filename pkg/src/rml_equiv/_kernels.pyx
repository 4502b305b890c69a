# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernels_py: same functions, same results."""

WILD = -1

cdef dict _cache = {}


cpdef bint label_leq(object a, object b):
    cdef Py_ssize_t i, n
    if a == b:
        return True
    if type(a) is tuple:
        n = len(<tuple>a)
        for i in range(n):
            x = (<tuple>a)[i]
            if x != WILD and x != (<tuple>b)[i]:
                return False
        return True
    return False


def forest_from_memory(dict mem):
    cdef dict kids = {}
    for ch in mem:
        kids.setdefault(ch[:-1], []).append(ch)
    return _build_children(mem, kids, ())


cdef tuple _build_children(dict mem, dict kids, tuple ch):
    cdef list out = []
    for c in kids.get(ch, ()):
        out.append((mem[c], _build_children(mem, kids, c)))
    out.sort()
    return tuple(out)


cpdef Py_ssize_t forest_size(tuple f):
    cdef Py_ssize_t n = 0
    for t in f:
        n += 1 + forest_size((<tuple>t)[1])
    return n


cpdef bint tree_embeds(tuple t1, tuple t2):
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


cdef bint _augment(Py_ssize_t i, list adj, list match, list seen):
    cdef Py_ssize_t j
    for j in adj[i]:
        if seen[j]:
            continue
        seen[j] = True
        if match[j] == -1 or _augment(match[j], adj, match, seen):
            match[j] = i
            return True
    return False


cpdef bint embed_forest(tuple f1, tuple f2):
    cdef Py_ssize_t n1 = len(f1), n2 = len(f2), i, j
    cdef list adj, row, match
    if n1 == 0:
        return True
    if n1 > n2:
        return False
    adj = []
    for i in range(n1):
        row = [j for j in range(n2) if tree_embeds(f1[i], f2[j])]
        if not row:
            return False
        adj.append(row)
    match = [-1] * n2
    for i in range(n1):
        if not _augment(i, adj, match, [False] * n2):
            return False
    return True
