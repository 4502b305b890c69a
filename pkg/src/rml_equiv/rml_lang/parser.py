"""Concrete syntax for RML.

    term  ::= expr (';' term)?
    expr  ::= 'let' x [':' type] '=' term 'in' term
            | ('λ' | '\\' | 'fun') x ':' type '.' term
            | 'if' term 'then' term 'else' expr
            | 'while' term 'do' expr
            | asg
    asg   ::= eq [':=' eq]
    eq    ::= app ['=' app]
    app   ::= ('succ'|'pred'|'ref') pre | 'mkvar' pre pre | pre pre*
    pre   ::= '!' pre | atom
    atom  ::= '()' | n | x | 'Ω' | 'omega' | '(' term [':' type] ')'
    type  ::= tatom ['->' type]
    tatom ::= 'unit' | 'int' | 'intref' | tatom 'ref' | '(' type ')'

Comments run from '#' to end of line.
"""
from __future__ import annotations

import re

from .syntax import Term
from .types import INT, INTREF, UNIT, Arrow, RmlType


class RmlSyntaxError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


KEYWORDS = {"let", "in", "if", "then", "else", "while", "do", "ref", "succ",
            "pred", "mkvar", "fun", "omega", "unit", "int", "intref"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>\(\)|:=|->|→|λ|Ω|\\|[().:;=!,])
""", re.VERBOSE)


def tokenize(src: str) -> list[tuple[str, str, int, int]]:
    toks = []
    i, line, col = 0, 1, 1
    while i < len(src):
        m = _TOKEN.match(src, i)
        if not m:
            raise RmlSyntaxError(f"unexpected character {src[i]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            if text == "→":
                text = "->"
            if text == "\\":
                text = "λ"
            toks.append((kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        i = m.end()
    toks.append(("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        k, t, _, _ = self.peek()
        return t == text and k in ("kw", "sym")

    def pos(self):
        _, _, l, c = self.peek()
        return (l, c)

    def fail(self, msg: str):
        k, t, l, c = self.peek()
        found = "end of input" if k == "eof" else repr(t)
        raise RmlSyntaxError(f"{msg}, found {found}", l, c)

    def expect(self, text: str, what: str | None = None):
        if not self.at(text):
            self.fail(f"expected {what or repr(text)}")
        self.i += 1

    def ident(self) -> str:
        k, t, _, _ = self.peek()
        if k != "ident":
            self.fail("expected identifier")
        self.i += 1
        return t

    # types
    def type_(self) -> RmlType:
        left = self.type_atom()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> RmlType:
        if self.at("unit"):
            self.i += 1
            t = UNIT
        elif self.at("int"):
            self.i += 1
            t = INT
        elif self.at("intref"):
            self.i += 1
            t = INTREF
        elif self.at("("):
            self.i += 1
            t = self.type_()
            self.expect(")")
        else:
            self.fail("expected a type")
        while self.at("ref"):
            if t != INT:
                self.fail("only int ref is supported")
            self.i += 1
            t = INTREF
        return t

    # terms
    def term(self) -> Term:
        p = self.pos()
        left = self.expr()
        if self.at(";"):
            self.i += 1
            return Term("seq", (left, self.term()), pos=p)
        return left

    def expr(self) -> Term:
        p = self.pos()
        if self.at("let"):
            self.i += 1
            x = self.ident()
            ann = None
            if self.at(":"):
                self.i += 1
                ann = self.type_()
            self.expect("=")
            m = self.term()
            self.expect("in")
            n = self.term()
            return Term("let", (m, n), name=x, ann=ann, pos=p)
        if self.at("λ") or self.at("fun"):
            self.i += 1
            x = self.ident()
            self.expect(":", "':' and a binder type")
            t = self.type_()
            self.expect(".", "'.'")
            return Term("lam", (self.term(),), name=x, ann=t, pos=p)
        if self.at("if"):
            self.i += 1
            g = self.term()
            self.expect("then")
            a = self.term()
            self.expect("else")
            b = self.expr()
            return Term("if", (g, a, b), pos=p)
        if self.at("while"):
            self.i += 1
            g = self.term()
            self.expect("do")
            return Term("while", (g, self.expr()), pos=p)
        return self.asg()

    def asg(self) -> Term:
        p = self.pos()
        left = self.eq()
        if self.at(":="):
            self.i += 1
            return Term("assign", (left, self.eq()), pos=p)
        return left

    def eq(self) -> Term:
        p = self.pos()
        left = self.app()
        if self.at("="):
            self.i += 1
            return Term("eq", (left, self.app()), pos=p)
        return left

    def starts_atom(self) -> bool:
        k, t, _, _ = self.peek()
        if k in ("num", "ident"):
            return True
        return t in ("()", "(", "!", "Ω", "omega") and k in ("sym", "kw")

    def app(self) -> Term:
        p = self.pos()
        for op in ("succ", "pred", "ref"):
            if self.at(op):
                self.i += 1
                return Term(op, (self.pre(),), pos=p)
        if self.at("mkvar"):
            self.i += 1
            a = self.pre()
            b = self.pre()
            return Term("mkvar", (a, b), pos=p)
        f = self.pre()
        while self.starts_atom():
            f = Term("app", (f, self.pre()), pos=p)
        return f

    def pre(self) -> Term:
        p = self.pos()
        if self.at("!"):
            self.i += 1
            return Term("deref", (self.pre(),), pos=p)
        return self.atom()

    def atom(self) -> Term:
        k, t, l, c = self.peek()
        p = (l, c)
        if k == "num":
            self.i += 1
            return Term("int", value=int(t), pos=p)
        if k == "ident":
            self.i += 1
            return Term("var", name=t, pos=p)
        if self.at("()"):
            self.i += 1
            return Term("unit", pos=p)
        if self.at("Ω") or self.at("omega"):
            self.i += 1
            return Term("omega", pos=p)
        if self.at("("):
            self.i += 1
            if self.at(")"):
                self.i += 1
                return Term("unit", pos=p)
            inner = self.term()
            if self.at(":"):
                self.i += 1
                ty = self.type_()
                inner = Term("ascribe", (inner,), ann=ty, pos=p)
            self.expect(")")
            return inner
        self.fail("expected a term")


def parse_term(source: str) -> Term:
    """Parse a term; raises RmlSyntaxError with line/column on failure."""
    p = _Parser(source)
    t = p.term()
    if p.peek()[0] != "eof":
        p.fail("unexpected trailing input")
    return t


def parse_type(source: str) -> RmlType:
    p = _Parser(source)
    t = p.type_()
    if p.peek()[0] != "eof":
        p.fail("unexpected trailing input")
    return t


def parse_context(source: str) -> list[tuple[str, RmlType]]:
    """Context files: `x : type` entries separated by commas or newlines."""
    out = []
    for chunk in re.split(r"[,\n]", re.sub(r"#[^\n]*", "", source)):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise RmlSyntaxError(f"bad context entry {chunk!r}", 1, 1)
        name, ty = chunk.split(":", 1)
        out.append((name.strip(), parse_type(ty)))
    return out
