"""Type checking and desugaring.

The checker is bidirectional so that Ω can pick up its base type from the
surrounding context (e.g. the other branch of a conditional).  An Ω whose type
is never constrained defaults to unit.
"""
from __future__ import annotations

import itertools

from .syntax import Term
from .types import INT, INTREF, UNIT, Arrow, RmlType


class RmlTypeError(Exception):
    def __init__(self, msg: str, pos=None):
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + msg)
        self.pos = pos


def _names(t: Term, acc: set):
    if t.name:
        acc.add(t.name)
    for c in t.children:
        _names(c, acc)
    return acc


class _Checker:
    def __init__(self, k: int, taken: set):
        self.k = k
        self.taken = taken
        self.counter = itertools.count()

    def fresh(self, hint: str) -> str:
        while True:
            n = f"_{hint}{next(self.counter)}"
            if n not in self.taken:
                self.taken.add(n)
                return n

    def err(self, t: Term, msg: str):
        raise RmlTypeError(msg, t.pos)

    def check(self, t: Term, env: dict, want: RmlType) -> Term:
        out = self.infer(t, env, want)
        if out.ty != want:
            self.err(t, f"expected {want}, got {out.ty}")
        return out

    def settle(self, t: Term, env: dict, out: Term, default=UNIT) -> Term:
        # re-run on an expression whose type was left open by Ω
        return out if out.ty is not None else self.check(t, env, default)

    def infer(self, t: Term, env: dict, want: RmlType | None) -> Term:
        k = t.kind
        if k == "unit":
            return t.with_type(UNIT)
        if k == "int":
            if not 0 <= t.value < self.k:
                self.err(t, f"literal {t.value} outside 0..{self.k - 1}")
            return t.with_type(INT)
        if k == "var":
            if t.name not in env:
                self.err(t, f"unbound variable {t.name}")
            return t.with_type(env[t.name])
        if k == "omega":
            if want is not None and not want.is_base:
                self.err(t, f"Ω is only available at base types, not {want}")
            return t.with_type(want)
        if k in ("succ", "pred"):
            m = self.check(t.children[0], env, INT)
            return Term(k, (m,), ty=INT, pos=t.pos)
        if k == "deref":
            m = self.check(t.children[0], env, INTREF)
            return Term(k, (m,), ty=INT, pos=t.pos)
        if k == "assign":
            m = self.check(t.children[0], env, INTREF)
            n = self.check(t.children[1], env, INT)
            return Term(k, (m, n), ty=UNIT, pos=t.pos)
        if k == "ref":
            m = self.check(t.children[0], env, INT)
            return Term(k, (m,), ty=INTREF, pos=t.pos)
        if k == "mkvar":
            m = self.check(t.children[0], env, Arrow(UNIT, INT))
            n = self.check(t.children[1], env, Arrow(INT, UNIT))
            return Term(k, (m, n), ty=INTREF, pos=t.pos)
        if k == "while":
            g = self.check(t.children[0], env, INT)
            b = self.check(t.children[1], env, UNIT)
            return Term(k, (g, b), ty=UNIT, pos=t.pos)
        if k == "eq":
            a = self.check(t.children[0], env, INT)
            b = self.check(t.children[1], env, INT)
            return Term(k, (a, b), ty=INT, pos=t.pos)
        if k == "if":
            g = self.check(t.children[0], env, INT)
            A, B = t.children[1], t.children[2]
            a = self.infer(A, env, want)
            if a.ty is None:
                b = self.infer(B, env, want)
                if b.ty is not None:
                    a = self.check(A, env, b.ty)
            else:
                b = self.check(B, env, a.ty)
            return Term(k, (g, a, b), ty=a.ty, pos=t.pos)
        if k == "lam":
            inner = dict(env)
            inner[t.name] = t.ann
            want_cod = want.cod if want is not None and want.is_arrow else None
            body = self.infer(t.children[0], inner, want_cod)
            body = self.settle(t.children[0], inner, body)
            return Term(k, (body,), name=t.name, ann=t.ann,
                        ty=Arrow(t.ann, body.ty), pos=t.pos)
        if k == "app":
            f = self.infer(t.children[0], env, None)
            if f.ty is None or not f.ty.is_arrow:
                self.err(t, f"applying a non-function of type {f.ty}")
            a = self.check(t.children[1], env, f.ty.dom)
            return Term(k, (f, a), ty=f.ty.cod, pos=t.pos)
        if k == "let":
            M, N = t.children
            m = self.check(M, env, t.ann) if t.ann else self.settle(M, env, self.infer(M, env, None))
            inner = dict(env)
            inner[t.name] = m.ty
            n = self.infer(N, inner, want)
            return Term(k, (m, n), name=t.name, ann=m.ty, ty=n.ty, pos=t.pos)
        if k == "seq":
            M, N = t.children
            m = self.settle(M, env, self.infer(M, env, None))
            n = self.infer(N, env, want)
            return Term(k, (m, n), ty=n.ty, pos=t.pos)
        if k == "ascribe":
            return self.check(t.children[0], env, t.ann)
        self.err(t, f"unsupported construct {k}")

    # desugaring of a fully typed tree
    def desugar(self, t: Term) -> Term:
        kids = tuple(self.desugar(c) for c in t.children)
        k = t.kind
        if k == "let":
            m, n = kids
            lam = Term("lam", (n,), name=t.name, ann=m.ty, ty=Arrow(m.ty, n.ty), pos=t.pos)
            return Term("app", (lam, m), ty=n.ty, pos=t.pos)
        if k == "seq":
            m, n = kids
            x = self.fresh("s")
            lam = Term("lam", (n,), name=x, ann=m.ty, ty=Arrow(m.ty, n.ty), pos=t.pos)
            return Term("app", (lam, m), ty=n.ty, pos=t.pos)
        if k == "omega":
            loop = Term("while", (Term("int", value=1, ty=INT), Term("unit", ty=UNIT)),
                        ty=UNIT, pos=t.pos)
            if t.ty == INT:
                x = self.fresh("s")
                lam = Term("lam", (Term("int", value=0, ty=INT),), name=x, ann=UNIT,
                           ty=Arrow(UNIT, INT))
                return Term("app", (lam, loop), ty=INT, pos=t.pos)
            return loop
        if k == "eq":
            return self.int_equality(kids[0], kids[1], t.pos)
        return Term(k, kids, name=t.name, value=t.value, ann=t.ann, ty=t.ty, pos=t.pos)

    def int_equality(self, m: Term, n: Term, pos) -> Term:
        # let a = m in let b = n in case split over 0..k-1
        a, b = self.fresh("a"), self.fresh("b")

        def lit(i):
            return Term("int", value=i, ty=INT)

        def shifted(x, c):
            out = Term("var", name=x, ty=INT)
            for _ in range(c):
                out = Term("pred", (out,), ty=INT)
            return out

        body = lit(0)
        for c in reversed(range(self.k)):
            inner = Term("if", (shifted(b, c), lit(0), lit(1)), ty=INT)
            body = Term("if", (shifted(a, c), body, inner), ty=INT)
        lb = Term("app", (Term("lam", (body,), name=b, ann=INT, ty=Arrow(INT, INT)), n), ty=INT)
        return Term("app", (Term("lam", (lb,), name=a, ann=INT, ty=Arrow(INT, INT)), m),
                    ty=INT, pos=pos)


def typecheck(t: Term, ctx, k: int = 3, desugar: bool = True) -> Term:
    """Annotate every node with its type; optionally desugar to the core language."""
    if k < 2:
        raise ValueError("integer modulus must be at least 2")
    env = dict(ctx)
    if len(env) != len(list(ctx)):
        raise RmlTypeError("duplicate names in context")
    ch = _Checker(k, _names(t, set(env)))
    out = ch.infer(t, env, None)
    out = ch.settle(t, env, out)
    return ch.desugar(out) if desugar else out
