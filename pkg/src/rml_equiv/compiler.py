"""Compilation of canonical terms into automaton families.

Both encodings share the structural cases.  They differ in where context
moves are stored and how pieces are lifted under a thread:

* "P" (P-strict): every context question opens a fresh child of the root, and
  right-hand-side threads live one level down.  Context moves inside a thread
  keep only the root of their chain, so stored-value information must travel
  in the control state.
* "R" (RML01): every move is stored on the chain of the current value, so a
  lifted piece is shifted down one level wholesale.
"""
from __future__ import annotations

from itertools import product

from .arena import INITIAL, RHS, UNIT_VAL, Move, arena_of_type
from .family import CompileError, Piece, final_closure, prune
from .rml_lang.types import INT, INTREF, UNIT, RmlType


def a0(v) -> Move:
    return Move(RHS, (), v)


def values(t: RmlType, k: int) -> list:
    if t.kind == "int":
        return list(range(k))
    if t.kind == "unit":
        return [UNIT_VAL]
    return [UNIT_VAL]


def init_letter(gamma) -> Move:
    return Move(INITIAL, (), tuple(gamma))


def _is_rhs_oq(m: Move) -> bool:
    return m.owner == RHS and bool(m.path) and m.path[-1] in ("arg", "rd", "wr")


def _is_question(m: Move) -> bool:
    return bool(m.path) and m.path[-1] in ("arg", "rd", "wr")


def _prefix(m: Move, owner: str, pre: tuple) -> Move:
    return Move(owner, pre + m.path, m.value, m.tag)


class Compiler:
    def __init__(self, encoding: str, k: int = 3):
        assert encoding in ("P", "R")
        self.enc = encoding
        self.k = k

    # ------------------------------------------------------------ helpers
    def vals(self, t):
        return values(t, self.k)

    def start(self, gamma, tag):
        p = Piece()
        i = p.state(f"{tag}.i")
        s = p.state(f"{tag}.s")
        p.init, p.sec = i, s
        p.add(i, init_letter(gamma), (None,), s, (s,))
        p.finals.add(i)
        return p, i, s

    @staticmethod
    def first_moves(M: Piece):
        """Transitions leaving the secondary state while only the root exists."""
        _, _, sec, upd = M.init_transition()
        res = []
        for (q, m, sig), (q2, u) in M.trans.items():
            if q == sec and q != M.init and all(s is None for s in sig[1:]):
                res.append((m, sig, q2, u))
        return res

    # ------------------------------------------------------------ dispatch
    def comp(self, t, ctx, gamma) -> Piece:
        f = getattr(self, "c_" + t.kind, None)
        if f is None:
            raise CompileError(f"no compilation case for {t.kind}")
        p = f(t, ctx, gamma)
        return prune(p)

    def ctype(self, ctx, name) -> RmlType:
        for n, ty in ctx:
            if n == name:
                return ty
        raise CompileError(f"unbound variable {name}")

    def val(self, gamma, name):
        return dict(gamma)[name]

    def const(self, gamma, v, tag):
        p, i, s = self.start(gamma, tag)
        f = p.state(f"{tag}.v")
        p.add(s, a0(v), (s,), f, (f,))
        p.finals.add(f)
        return p

    def c_unit(self, t, ctx, gamma):
        return self.const(gamma, UNIT_VAL, "unit")

    def c_int(self, t, ctx, gamma):
        return self.const(gamma, t.value % self.k, "int")

    def c_var(self, t, ctx, gamma):
        return self.const(gamma, self.val(gamma, t.name), "var")

    def c_succ(self, t, ctx, gamma):
        return self.const(gamma, (self.val(gamma, t.children[0].name) + 1) % self.k, "succ")

    def c_pred(self, t, ctx, gamma):
        return self.const(gamma, (self.val(gamma, t.children[0].name) - 1) % self.k, "pred")

    def c_if(self, t, ctx, gamma):
        c, A, B = t.children
        return self.comp(A if self.val(gamma, c.name) != 0 else B, ctx, gamma)

    def ctx_call(self, p, s, question, answers, tag):
        """Context question then one of several answers, then the RHS answer.

        `answers` is a list of (answer letter, RHS value).
        """
        q3 = p.state(f"{tag}.q")
        if self.enc == "P":
            p.add(s, question, (s, None), q3, (s, q3))
        else:
            p.add(s, question, (s,), q3, (q3,))
        for ans, v in answers:
            q4 = p.state(f"{tag}.a")
            f = p.state(f"{tag}.v")
            if self.enc == "P":
                p.add(q3, ans, (s, q3), q4, (s, q4))
                p.add(q4, a0(v), (s,), f, (f,))
            else:
                p.add(q3, ans, (q3,), q4, (q4,))
                p.add(q4, a0(v), (q4,), f, (f,))
            p.finals.add(f)
        return p

    def c_assign(self, t, ctx, gamma):
        x, y = t.children
        j = self.val(gamma, y.name)
        p, i, s = self.start(gamma, "asg")
        return self.ctx_call(p, s, Move(x.name, ("wr",), j), [(Move(x.name, ("ok",)), UNIT_VAL)], "asg")

    def c_deref(self, t, ctx, gamma):
        x = t.children[0].name
        p, i, s = self.start(gamma, "drf")
        return self.ctx_call(p, s, Move(x, ("rd",)),
                             [(Move(x, ("rv",), j), j) for j in range(self.k)], "drf")

    # ---------------------------------------------------------------- let
    @staticmethod
    def held0(M: Piece):
        return M.init_transition()[3][0]

    def rebase_root(self, N: Piece, new):
        """P encoding: the root of a base piece never changes, so a piece run
        after another reads the earlier piece's root state instead of its own."""
        if self.enc != "P":
            return
        old = self.held0(N)
        if old == new:
            return
        trans = {}
        for (q, m, sig), (q2, upd) in N.trans.items():
            if q == N.init:
                trans[(q, m, sig)] = (q2, upd)
                continue
            sig = (new if sig[0] == old else sig[0],) + sig[1:]
            upd = (new if upd[0] == old else upd[0],) + upd[1:]
            trans[(q, m, sig)] = (q2, upd)
        N.trans = trans

    def splice(self, M: Piece, Ns: dict) -> Piece:
        """Sequential composition: M's answer j continues as N_j."""
        if self.enc == "P":
            h = self.held0(M)
            for N in Ns.values():
                self.rebase_root(N, h)
        out = Piece(level=M.level, init=M.init, sec=M.sec)
        out.names.update(M.names)
        out.alphabet |= M.alphabet
        out.finals.add(M.init)
        firsts = {j: self.first_moves(N) for j, N in Ns.items()}
        for (q, m, sig), (q2, upd) in M.trans.items():
            if q2 in M.finals and q2 != M.init:
                if m.owner != RHS or m.path or len(sig) != 1:
                    raise CompileError(f"unexpected final-entering move {m}")
                if m.value not in Ns:
                    continue
                for m2, sig2, q3, u3 in firsts[m.value]:
                    if self.enc == "P" and m2.owner != RHS:
                        u3 = (sig[0],) + u3[1:]
                    out.add(q, m2, (sig[0],) + sig2[1:], q3, u3)
            elif q in M.finals and q != M.init:
                continue
            else:
                out.add(q, m, sig, q2, upd)
        for N in Ns.values():
            out.absorb(N)
            out.finals |= N.finals - {N.init}
        return out

    def c_let(self, t, ctx, gamma):
        C1, C2 = t.children
        ty = t.ann if t.ann is not None else C1.ty
        M = self.comp(C1, ctx, gamma)
        Ns = {j: self.comp(C2, ctx + [(t.name, ty)], gamma + ((t.name, j),)) for j in self.vals(ty)}
        return self.splice(M, Ns)

    # -------------------------------------------------------------- while
    def c_while(self, t, ctx, gamma):
        C1, C2 = t.children
        M = self.comp(C1, ctx, gamma)
        N = self.comp(C2, ctx, gamma)
        self.rebase_root(N, self.held0(M))
        p = Piece(level=max(M.level, N.level))
        i = p.state("while.i")
        x = p.state("while.x")
        p.init = i
        _, _, msec, mupd = M.init_transition()
        p.sec = msec
        p.add(i, init_letter(gamma), (None,), msec, mupd)
        p.finals |= {i, x}
        p.names.update(M.names)
        p.names.update(N.names)
        first = {"M": self.first_moves(M), "N": self.first_moves(N)}
        fin = {"M": M.finals - {M.init}, "N": N.finals - {N.init}}

        def resolve(which, root, visiting):
            out = []
            for m, sig, q2, u in first[which]:
                if q2 in fin[which]:
                    if which == "M" and m.value == 0:
                        out.append((a0(UNIT_VAL), (root,), x, (x,)))
                        continue
                    other = "N" if which == "M" else "M"
                    if other in visiting:
                        continue  # divergence: no observable move
                    out.extend(resolve(other, root, visiting | {which}))
                else:
                    if self.enc == "P" and m.owner != RHS:
                        u = (root,) + u[1:]
                    out.append((m, (root,) + sig[1:], q2, u))
            return out

        for name, A in (("M", M), ("N", N)):
            for (q, m, sig), (q2, upd) in A.trans.items():
                if q == A.init or (q in fin[name]):
                    continue
                if q2 in fin[name]:
                    if name == "M" and m.value == 0:
                        p.add(q, a0(UNIT_VAL), sig, x, (x,))
                    else:
                        other = "N" if name == "M" else "M"
                        for r in resolve(other, sig[0], {name}):
                            p.add(q, *r)
                else:
                    p.add(q, m, sig, q2, upd)
        return p

    # ------------------------------------------------------------ threads
    def embed_threads(self, p: Piece, s3, threads):
        """Attach pieces run as threads opened from s3 (held at the root)."""
        for letter, M, rel in threads:
            _, _, msec, mupd = M.init_transition()
            p.add(s3, letter, (s3, None), msec, (s3, mupd[0]))
            p.names.update(M.names)
            for (q, m, sig), (q2, upd) in M.trans.items():
                if q == M.init:
                    continue
                if m.owner == RHS:
                    p.add(q, rel(m), (s3,) + sig, q2, (s3,) + upd)
                elif self.enc == "P":
                    if len(sig) < 2:
                        raise CompileError(f"context move {m} at the root")
                    p.add(q, m, (s3,) + sig[1:], q2, (s3,) + upd[1:])
                else:
                    p.add(q, m, (s3,) + sig, q2, (s3,) + upd)
            p.finals |= M.finals - {M.init}
        final_closure(p)
        return p

    def c_lam(self, t, ctx, gamma):
        body = t.children[0]
        dom = t.ann
        if not dom.is_base:
            raise CompileError("lambda binder of non-base type")
        p, i, s2 = self.start(gamma, "lam")
        s3 = p.state("lam.r")
        p.add(s2, a0(UNIT_VAL), (s2,), s3, (s3,))
        p.finals.add(s3)
        threads = []
        for v in self.vals(dom):
            M = self.comp(body, ctx + [(t.name, dom)], gamma + ((t.name, v),))
            threads.append((Move(RHS, ("arg",), v), M, lambda m: _prefix(m, RHS, ("res",))))
        return self.embed_threads(p, s3, threads)

    def mkvar_threads(self, t, ctx, gamma, owner, pre):
        rd, wr = t.children
        threads = []
        M = self.comp(rd.children[0], ctx + [(rd.name, UNIT)], gamma + ((rd.name, UNIT_VAL),))
        threads.append((Move(owner, pre + ("rd",)), M,
                        lambda m: Move(owner, pre + ("rv",), m.value)))
        for j in range(self.k):
            N = self.comp(wr.children[0], ctx + [(wr.name, INT)], gamma + ((wr.name, j),))
            threads.append((Move(owner, pre + ("wr",), j), N,
                            lambda m: Move(owner, pre + ("ok",))))
        return threads

    def c_mkvar(self, t, ctx, gamma):
        p, i, s2 = self.start(gamma, "mkv")
        s3 = p.state("mkv.r")
        p.add(s2, a0(UNIT_VAL), (s2,), s3, (s3,))
        p.finals.add(s3)
        return self.embed_threads(p, s3, self.mkvar_threads(t, ctx, gamma, RHS, ()))

    # ------------------------------------------------------------- newref
    def c_newref(self, t, ctx, gamma):
        x = t.name
        M = self.comp(t.children[0], ctx + [(x, INTREF)], gamma + ((x, UNIT_VAL),))
        p = self.restrict_P(M, x, gamma) if self.enc == "P" else self.restrict_R(M, x, gamma)
        p = self.hide(p, x)
        p = prune(p)
        final_closure(p)
        return p

    def _held(self, p, M, table, s, i):
        key = (s, i)
        h = table.get(key)
        if h is None:
            h = table[key] = p.state((M.names[s], i))
        return h

    def restrict_P(self, M, x, gamma):
        k = self.k
        p = Piece(level=M.level)
        p.init = p.state("ref.i")
        held, ctl = {}, {}
        p.names.update(M.names)

        def C(q, i):
            # control and stored copies of a state share one id
            if (q, i) not in ctl:
                ctl[(q, i)] = self._held(p, M, held, q, i)
                todo.append((q, i))
            return ctl[(q, i)]

        todo = []
        _, _, msec, mupd = M.init_transition()
        p.sec = C(msec, 0)
        p.add(p.init, init_letter(gamma), (None,), p.sec, (self._held(p, M, held, mupd[0], 0),))
        p.finals.add(p.init)
        out = M.out()
        while todo:
            q, i = todo.pop()
            if q in M.finals and q != M.init:
                p.finals.add(ctl[(q, i)])
            for m, sig, q2, upd in out.get(q, ()):
                for j0 in range(k):
                    # only right-hand-side moves refresh the value kept at the root
                    rv = j0
                    if m.owner == x:
                        if m.path == ("wr",):
                            nv = m.value
                        elif m.path == ("rv",):
                            if m.value != i:
                                continue
                            nv = i
                        else:
                            nv = i
                    elif _is_rhs_oq(m):
                        nv = j0
                    elif m.owner == RHS:
                        nv = rv = i
                    else:
                        nv = i
                    s0 = self._held(p, M, held, sig[0], j0)
                    u0 = self._held(p, M, held, upd[0], rv)
                    p.add(ctl[(q, i)], m, (s0,) + sig[1:], C(q2, nv), (u0,) + upd[1:])
        return p

    def restrict_R(self, M, x, gamma):
        p = Piece(level=M.level)
        p.init = p.state("ref.i")
        held = {}
        p.names.update(M.names)
        _, _, msec, mupd = M.init_transition()
        p.sec = msec
        p.add(p.init, init_letter(gamma), (None,), msec, (self._held(p, M, held, mupd[0], 0),))
        p.finals = {p.init} | (M.finals - {M.init})
        for (q, m, sig), (q2, upd) in M.trans.items():
            if q == M.init:
                continue
            for j0 in range(self.k):
                nv = j0
                if m.owner == x:
                    if m.path == ("wr",):
                        nv = m.value
                    elif m.path == ("rv",) and m.value != j0:
                        continue
                s0 = self._held(p, M, held, sig[0], j0)
                u0 = self._held(p, M, held, upd[0], nv)
                p.add(q, m, (s0,) + sig[1:], q2, (u0,) + upd[1:])
        return p

    def hide(self, p: Piece, x: str) -> Piece:
        """Remove the moves of x, composing each question/answer pair away."""
        out = p.out()
        exact = self.enc == "R"

        def key(sig):
            return sig if exact else sig[0]

        def resolve(q, kk, seen):
            xq = [(m, sig, q1, u1) for m, sig, q1, u1 in out.get(q, ())
                  if m.owner == x and _is_question(m) and key(sig) == kk]
            if not xq:
                return [(m, sig, q2, u) for m, sig, q2, u in out.get(q, ())
                        if m.owner != x and key(sig) == kk]
            if (q, kk) in seen:
                return []
            res = []
            for m, sig, q1, u1 in xq:
                for ma, siga, q2, u2 in out.get(q1, ()):
                    if ma.owner == x and siga == u1:
                        res.extend(resolve(q2, key(u2), seen | {(q, kk)}))
            return res

        r = Piece(level=p.level, init=p.init, sec=p.sec, finals=set(p.finals))
        r.names.update(p.names)
        for (q, m, sig), (q2, upd) in p.trans.items():
            if m.owner == x:
                if _is_question(m):
                    for m3, sig3, q3, u3 in resolve(q, key(sig), set()):
                        # the composed move reads the state from before the hidden moves
                        nsig = sig if exact else (sig[0],) + sig3[1:]
                        r.add(q, m3, nsig, q3, u3)
                continue
            r.add(q, m, sig, q2, upd)
        r.alphabet = {m for m in r.alphabet if m.owner != x}
        return r

    # ------------------------------------------------------------- letapp
    def c_letapp(self, t, ctx, gamma):
        if self.enc == "P":
            return self.letapp_P(t, ctx, gamma)
        return self.letapp_R(t, ctx, gamma)

    def arg_piece(self, arg, ctx, gamma):
        if arg.kind == "var":
            return self.const(gamma, self.val(gamma, arg.name), "arg")
        return self.comp(arg, ctx, gamma)

    def letapp_P(self, t, ctx, gamma):
        zv, arg, body = t.children
        z, x = zv.name, t.name
        zt = self.ctype(ctx, z)
        cod = zt.cod
        if not cod.is_base:
            raise CompileError("context function with non-base result")
        F = self.arg_piece(arg, ctx, gamma)
        p, i, c2 = self.start(gamma, "app")
        p.names.update(F.names)
        firsts = self.first_moves(F)
        first_keys = {(F.init_transition()[2], m, sig) for m, sig, _, _ in firsts}
        for m, sig, q2, u in firsts:
            if m.owner != RHS or m.path:
                raise CompileError("argument piece does not answer first")
            p.add(c2, Move(z, ("arg",), m.value), (c2, None), q2, (c2, u[0]))
        roots = set()
        for (q, m, sig), (q2, upd) in F.trans.items():
            if q == F.init or (q, m, sig) in first_keys:
                continue
            roots.add(upd[0])
            if m.owner == RHS:
                p.add(q, _prefix(m, z, ("arg",)), (c2,) + sig, q2, (c2,) + upd)
            else:
                p.add(q, m, (c2,) + sig[1:], q2, (c2,) + upd[1:])
        for _, _, _, u in firsts:
            roots.add(u[0])
        fin = p.state("app.v")
        p.finals.add(fin)
        for j in self.vals(cod):
            tj = p.state(f"app.res{j}")
            for f in F.finals - {F.init}:
                for r in roots:
                    p.add(f, Move(z, ("res",), j), (c2, r), tj, (c2, tj))
            p.add(tj, a0(j), (c2,), fin, (fin,))
        p = prune(p)
        Ns = {j: self.comp(body, ctx + [(x, cod)], gamma + ((x, j),)) for j in self.vals(cod)}
        return self.splice(p, Ns)

    def callbacks(self, arg, ctx, gamma, z):
        if arg.kind == "var":
            return []
        if arg.kind == "lam":
            res = []
            for v in self.vals(arg.ann):
                T = self.comp(arg.children[0], ctx + [(arg.name, arg.ann)], gamma + ((arg.name, v),))
                res.append((Move(z, ("arg", "arg"), v), T,
                            lambda m: Move(z, ("arg", "res"), m.value)))
            return res
        return self.mkvar_threads(arg, ctx, gamma, z, ("arg",))

    def add_callbacks(self, p: Piece, opens, cbs):
        for s, chain in opens:
            pre = chain[:-1]
            for letter, T, ans in cbs:
                if T.level != 0:
                    raise CompileError("callback body above level 0")
                Tc, _ = T.copy("")
                _, _, tsec, tupd = Tc.init_transition()
                p.names.update(Tc.names)
                p.add(s, letter, chain, tsec, pre + tupd)
                fins = Tc.finals - {Tc.init}
                for (q, m, sig), (q2, upd) in Tc.trans.items():
                    if q == Tc.init or q in fins:
                        continue
                    if q2 in fins:
                        p.add(q, ans(m), pre + sig, s, chain)
                    else:
                        p.add(q, m, pre + sig, q2, pre + upd)

    def letapp_R(self, t, ctx, gamma):
        zv, arg, body = t.children
        z, x = zv.name, t.name
        zt = self.ctype(ctx, z)
        cod = zt.cod
        p, i, c2 = self.start(gamma, "app")
        c3 = p.state("app.c")
        v = self.val(gamma, arg.name) if arg.kind == "var" else UNIT_VAL
        p.add(c2, Move(z, ("arg",), v), (c2,), c3, (c3,))
        cbs = self.callbacks(arg, ctx, gamma, z)
        opens = [(c3, (c3,))]
        if cod.is_base:
            fin = p.state("app.v")
            p.finals.add(fin)
            for j in self.vals(cod):
                tj = p.state(f"app.res{j}")
                p.add(c3, Move(z, ("res",), j), (c3,), tj, (tj,))
                p.add(tj, a0(j), (tj,), fin, (fin,))
            self.add_callbacks(p, opens, cbs)
            p = prune(p)
            Ns = {j: self.comp(body, ctx + [(x, cod)], gamma + ((x, j),)) for j in self.vals(cod)}
            return self.splice(p, Ns)
        N = self.comp(body, ctx + [(x, cod)], gamma + ((x, UNIT_VAL),))
        xa = arena_of_type(cod, self.k, owner=x)
        p_moves = {m for m in xa.moves if m not in xa.initials and xa.label[m][0] == "O"}
        first_qs = set()
        for i0 in xa.initials:
            first_qs |= set(xa.enables.get(i0, []))

        def rel(m):
            return _prefix(m, z, ("res",)) if m.owner == x else m

        _, _, nsec, nupd = N.init_transition()
        U, ren_u = N.copy("U")
        S, ren_s = N.copy("S")
        D, ren_d = N.copy("D")
        for P_ in (U, S, D):
            p.names.update(P_.names)
        bullet = Move(z, ("res",))
        p.add(c3, bullet, (c3,), ren_u[nsec], (ren_u[nupd[0]],))
        p.add(c3, bullet.tagged("src"), (c3,), ren_s[nsec], (ren_s[nupd[0]],))

        def ms(sig):
            return tuple(None if s is None else ren_s[s] for s in sig)

        for (q, m, sig), (q2, upd) in N.trans.items():
            if q == N.init:
                continue
            m2 = rel(m)
            p.add(ren_u[q], m2, tuple(None if s is None else ren_u[s] for s in sig),
                  ren_u[q2], tuple(ren_u[s] for s in upd))
            if m.owner == x and m.untagged() in p_moves:
                opens.append((ren_u[q2], tuple(ren_u[s] for s in upd)))
                opens.append((ren_s[q2], ms(upd)))
                opens.append((ren_d[q2], ms(upd)))
            if m.tag:
                continue
            p.add(ren_s[q], m2, ms(sig), ren_s[q2], ms(upd))
            p.add(ren_d[q], m2, ms(sig), ren_d[q2], ms(upd))
            if m.owner == x and m in first_qs:
                p.add(ren_s[q], m2.tagged("tgt"), ms(sig), ren_d[q2], ms(upd))
        for f in N.finals - {N.init}:
            p.finals |= {ren_u[f], ren_d[f]}
        self.add_callbacks(p, opens, cbs)
        final_closure(p)
        return p


def gammas(ctx, k):
    """All tuples of initial context values, in context order."""
    choices = [[(n, v) for v in values(ty, k)] for n, ty in ctx]
    return [tuple(c) for c in product(*choices)]
