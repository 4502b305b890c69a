"""Conversion of typed core terms into canonical form.

The algorithm is an environment-based A-normalisation: every intermediate
base value is named by a `let`, applications of context functions become one
of the `let x = z ...` forms, and beta-redexes are reduced by evaluating the
body in an extended environment (so functions are never let-bound).
"""
from __future__ import annotations

import itertools
import re

from .rml_lang.syntax import Term, free_vars
from .rml_lang.types import INT, INTREF, UNIT, Arrow, RmlType


class UnsupportedConstruct(Exception):
    pass


# atoms produced while normalising
#   ("c", C, ty)            canonical base computation
#   ("hvar", name, ty)      higher-type variable in scope
#   ("lam", x, T, body, env) closure over a source lambda
#   ("mkv", read, write)    bad variable built from two function atoms


def _var(n, ty=None):
    return Term("var", name=n, ty=ty)


class _Canon:
    def __init__(self):
        self.counter = itertools.count(1)

    def fresh(self, hint: str) -> str:
        stem = re.sub(r"[0-9_]+$", "", hint.lstrip("_")) or "v"
        return f"{stem}{next(self.counter)}"

    def finish(self, atom, K, ty):
        return self.reify(atom, ty) if K is None else K(atom)

    def as_var(self, atom, cont):
        _, c, ty = atom
        if c.kind == "var":
            return cont(c.name)
        n = self.fresh("t")
        body = cont(n)
        return Term("let", (c, body), name=n, ann=ty, ty=body.ty)

    # tail position rendering of any atom
    def reify(self, atom, ty: RmlType) -> Term:
        tag = atom[0]
        if tag == "c":
            return atom[1]
        if tag == "lam":
            _, x, T, body, env = atom
            y = self.fresh(x)
            env2 = dict(env)
            env2[x] = ("b", y) if T.is_base else ("hvar", y, T)
            b = self.norm(body, env2, None)
            return Term("lam", (b,), name=y, ann=T, ty=Arrow(T, b.ty))
        if tag == "mkv":
            r = self.reify(atom[1], Arrow(UNIT, INT))
            w = self.reify(atom[2], Arrow(INT, UNIT))
            return Term("mkvar", (r, w), ty=INTREF)
        _, name, T = atom
        if T.kind == "intref":
            u, v = self.fresh("u"), self.fresh("v")
            rd = Term("lam", (Term("deref", (_var(name, INTREF),), ty=INT),), name=u, ann=UNIT,
                      ty=Arrow(UNIT, INT))
            wr = Term("lam", (Term("assign", (_var(name, INTREF), _var(v, INT)), ty=UNIT),),
                      name=v, ann=INT, ty=Arrow(INT, UNIT))
            return Term("mkvar", (rd, wr), ty=INTREF)
        if T.is_arrow:
            y = self.fresh("y")
            arg = ("c", _var(y, T.dom), T.dom) if T.dom.is_base else ("hvar", y, T.dom)
            body = self.apply(atom, arg, None, T.cod)
            return Term("lam", (body,), name=y, ann=T.dom, ty=T)
        return _var(name, T)

    def apply(self, f, arg, K, ty: RmlType):
        """Apply function atom f to an argument atom (base args already named)."""
        if f[0] == "lam":
            _, x, T, body, env = f
            env2 = dict(env)
            if T.is_base:
                return self.as_var(arg, lambda n: self.norm(body, {**env2, x: ("b", n)}, K))
            env2[x] = arg
            return self.norm(body, env2, K)
        if f[0] != "hvar":
            raise UnsupportedConstruct(f"cannot apply {f[0]}")
        _, z, zt = f
        dom, cod = zt.dom, zt.cod
        r = self.fresh("x")
        res = ("c", _var(r, cod), cod) if cod.is_base else ("hvar", r, cod)

        def build(argterm):
            body = self.finish(res, K, cod)
            return Term("letapp", (_var(z, zt), argterm, body), name=r, ann=cod, ty=body.ty)

        if dom.is_base:
            return self.as_var(arg, lambda n: build(_var(n, dom)))
        return build(self.reify(arg, dom))

    def norm(self, t: Term, env: dict, K):
        k = t.kind
        ty = t.ty
        if k == "unit":
            return self.finish(("c", Term("unit", ty=UNIT), UNIT), K, UNIT)
        if k == "int":
            return self.finish(("c", Term("int", value=t.value, ty=INT), INT), K, INT)
        if k == "var":
            b = env[t.name]
            atom = ("c", _var(b[1], ty), ty) if b[0] == "b" else b
            return self.finish(atom, K, ty)
        if k in ("succ", "pred"):
            return self.norm(t.children[0], env, lambda a: self.as_var(
                a, lambda n: self.finish(("c", Term(k, (_var(n, INT),), ty=INT), INT), K, INT)))
        if k == "deref":
            def d(r):
                if r[0] == "hvar":
                    return self.finish(("c", Term("deref", (_var(r[1], INTREF),), ty=INT), INT), K, INT)
                return self.apply(r[1], ("c", Term("unit", ty=UNIT), UNIT), K, INT)
            return self.norm(t.children[0], env, d)
        if k == "assign":
            def a1(r):
                def a2(v):
                    def a3(n):
                        if r[0] == "hvar":
                            c = Term("assign", (_var(r[1], INTREF), _var(n, INT)), ty=UNIT)
                            return self.finish(("c", c, UNIT), K, UNIT)
                        return self.apply(r[2], ("c", _var(n, INT), INT), K, UNIT)
                    return self.as_var(v, a3)
                return self.norm(t.children[1], env, a2)
            return self.norm(t.children[0], env, a1)
        if k == "ref":
            def mk(a):
                x = self.fresh("r")
                atom = ("hvar", x, INTREF)
                c = a[1]
                if c.kind == "int" and c.value == 0:
                    body = self.finish(atom, K, INTREF)
                    return Term("newref", (body,), name=x, ann=INTREF, ty=body.ty)

                def init(n):
                    rest = self.finish(atom, K, INTREF)
                    wr = Term("assign", (_var(x, INTREF), _var(n, INT)), ty=UNIT)
                    seq = Term("let", (wr, rest), name=self.fresh("u"), ann=UNIT, ty=rest.ty)
                    return Term("newref", (seq,), name=x, ann=INTREF, ty=seq.ty)
                return self.as_var(a, init)
            return self.norm(t.children[0], env, mk)
        if k == "lam":
            return self.finish(("lam", t.name, t.ann, t.children[0], env), K, ty)
        if k == "mkvar":
            return self.norm(t.children[0], env, lambda a: self.norm(
                t.children[1], env, lambda b: self.finish(("mkv", a, b), K, INTREF)))
        if k == "app":
            F, A = t.children
            return self.norm(F, env, lambda f: self.norm(
                A, env, lambda a: self.apply(f, a, K, ty)))
        if k == "if":
            G, A, B = t.children

            def branch(n):
                if ty.is_base:
                    c = Term("if", (_var(n, INT), self.norm(A, env, None), self.norm(B, env, None)), ty=ty)
                    if K is None:
                        return c
                    return self.as_var(("c", c, ty), lambda r: K(("c", _var(r, ty), ty)))
                return Term("if", (_var(n, INT), self.norm(A, env, K), self.norm(B, env, K)))
            return self.norm(G, env, lambda g: self.as_var(g, branch))
        if k == "while":
            c = Term("while", (self.norm(t.children[0], env, None),
                               self.norm(t.children[1], env, None)), ty=UNIT)
            if K is None:
                return c
            return self.as_var(("c", c, UNIT), lambda r: K(("c", _var(r, UNIT), UNIT)))
        raise UnsupportedConstruct(f"construct {k!r} is not supported by canonicalisation")


def canonicalize(t: Term, ctx=()) -> Term:
    """Canonical form of a typed, desugared term.  `ctx` lists the free variables."""
    ctx = list(ctx)
    env = {}
    for name, ty in ctx:
        env[name] = ("b", name) if ty.is_base else ("hvar", name, ty)
    missing = {n for n in free_vars(t) if n not in env}
    if missing:
        raise UnsupportedConstruct(f"free variables without types: {sorted(missing)}")
    c = _Canon()
    # keep generated names clear of the context
    taken = set(env)
    orig = c.fresh

    def fresh(hint):
        while True:
            n = orig(hint)
            if n not in taken:
                return n
    c.fresh = fresh
    return c.norm(t, env, None)


def _is_var(t) -> bool:
    return isinstance(t, Term) and t.kind == "var" and not t.children


def _is_lam(t) -> bool:
    return isinstance(t, Term) and t.kind == "lam" and len(t.children) == 1 and validate_canonical(t.children[0])


def validate_canonical(t) -> bool:
    """True iff t is drawn exactly from the canonical grammar."""
    if not isinstance(t, Term):
        return False
    k, ch = t.kind, t.children
    if k in ("unit", "int"):
        return not ch
    if k == "var":
        return not ch and (t.ty is None or t.ty.is_base)
    if k in ("succ", "pred", "deref"):
        return len(ch) == 1 and _is_var(ch[0])
    if k == "assign":
        return len(ch) == 2 and _is_var(ch[0]) and _is_var(ch[1])
    if k == "if":
        return len(ch) == 3 and _is_var(ch[0]) and validate_canonical(ch[1]) and validate_canonical(ch[2])
    if k == "lam":
        return _is_lam(t)
    if k == "mkvar":
        return len(ch) == 2 and _is_lam(ch[0]) and _is_lam(ch[1])
    if k == "newref":
        return len(ch) == 1 and validate_canonical(ch[0])
    if k == "while":
        return len(ch) == 2 and all(validate_canonical(c) for c in ch)
    if k == "let":
        return (len(ch) == 2 and (t.ann is None or t.ann.is_base)
                and all(validate_canonical(c) for c in ch))
    if k == "letapp":
        if len(ch) != 3 or not _is_var(ch[0]) or not validate_canonical(ch[2]):
            return False
        arg = ch[1]
        return _is_var(arg) or _is_lam(arg) or (
            arg.kind == "mkvar" and len(arg.children) == 2 and all(_is_lam(c) for c in arg.children))
    return False


def alpha_equal(a: Term, b: Term) -> bool:
    """Structural equality up to renaming of bound variables."""
    def go(x, y, ex, ey):
        if x.kind != y.kind or x.value != y.value or len(x.children) != len(y.children):
            return False
        if x.kind == "var":
            return ex.get(x.name, ("free", x.name)) == ey.get(y.name, ("free", y.name))
        if x.kind in ("lam", "let", "newref", "letapp"):
            if x.ann != y.ann:
                return False
            *heads_x, bx = x.children
            *heads_y, by = y.children
            if x.kind == "lam":
                heads_x, heads_y, bx, by = [], [], x.children[0], y.children[0]
            for hx, hy in zip(heads_x, heads_y):
                if not go(hx, hy, ex, ey):
                    return False
            tag = ("b", len(ex), id(x))
            return go(bx, by, {**ex, x.name: tag}, {**ey, y.name: tag})
        return all(go(c, d, ex, ey) for c, d in zip(x.children, y.children))
    return go(a, b, {}, {})


def pretty(t: Term) -> str:
    """Print a (canonical or source) term in the concrete syntax."""
    return _pp(t, 0)


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s


# precedence levels: 0 term (with ;), 1 expr, 2 assign, 3 eq, 4 app, 5 atom
def _pp(t: Term, ctx: int) -> str:
    k, ch = t.kind, t.children
    if k == "unit":
        return "()"
    if k == "int":
        return str(t.value)
    if k == "var":
        return t.name
    if k == "omega":
        return "Ω"
    if k in ("succ", "pred", "ref"):
        return _paren(f"{k} {_pp(ch[0], 5)}", ctx > 4)
    if k == "deref":
        return _paren(f"!{_pp(ch[0], 5)}", ctx > 5)
    if k == "mkvar":
        return _paren(f"mkvar {_pp(ch[0], 5)} {_pp(ch[1], 5)}", ctx > 4)
    if k == "app":
        return _paren(f"{_pp(ch[0], 4)} {_pp(ch[1], 5)}", ctx > 4)
    if k == "assign":
        return _paren(f"{_pp(ch[0], 3)} := {_pp(ch[1], 3)}", ctx > 2)
    if k == "eq":
        return _paren(f"{_pp(ch[0], 4)} = {_pp(ch[1], 4)}", ctx > 3)
    if k == "seq":
        return _paren(f"{_pp(ch[0], 1)}; {_pp(ch[1], 0)}", ctx > 0)
    if k == "lam":
        return _paren(f"λ{t.name}:{t.ann}. {_pp(ch[0], 0)}", ctx > 0)
    if k == "if":
        return _paren(f"if {_pp(ch[0], 0)} then {_pp(ch[1], 0)} else {_pp(ch[2], 1)}", ctx > 0)
    if k == "while":
        return _paren(f"while {_pp(ch[0], 0)} do {_pp(ch[1], 1)}", ctx > 0)
    if k == "let":
        return _paren(f"let {t.name} = {_pp(ch[0], 0)} in {_pp(ch[1], 0)}", ctx > 0)
    if k == "newref":
        return _paren(f"let {t.name} = ref 0 in {_pp(ch[0], 0)}", ctx > 0)
    if k == "letapp":
        return _paren(f"let {t.name} = {_pp(ch[0], 4)} {_pp(ch[1], 5)} in {_pp(ch[2], 0)}", ctx > 0)
    if k == "ascribe":
        return f"({_pp(ch[0], 0)} : {t.ann})"
    raise UnsupportedConstruct(k)
