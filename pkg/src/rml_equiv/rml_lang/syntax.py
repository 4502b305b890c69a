"""Abstract syntax shared by source terms and canonical terms."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .types import RmlType

# source kinds
SOURCE_KINDS = {
    "unit", "int", "var", "succ", "pred", "if", "deref", "assign", "ref",
    "app", "lam", "while", "mkvar", "omega", "let", "seq", "eq", "ascribe",
}
# extra kinds only produced by canonicalisation
CANON_KINDS = {"newref", "letapp"}


@dataclass(frozen=True)
class Term:
    """One node of RML syntax.

    `name` is the variable (for var) or binder (lam/let/newref/letapp).
    `ann` is a binder annotation (lam) or ascription (ascribe).
    `ty` is filled in by the type checker.
    """
    kind: str
    children: tuple = ()
    name: str | None = None
    value: int | None = None
    ann: RmlType | None = None
    ty: RmlType | None = field(default=None, compare=False)
    pos: tuple | None = field(default=None, compare=False)

    def with_type(self, ty: RmlType) -> "Term":
        return replace(self, ty=ty)

    def to_json(self):
        out = {"kind": self.kind}
        if self.name is not None:
            out["name"] = self.name
        if self.value is not None:
            out["value"] = self.value
        if self.ann is not None:
            out["ann"] = self.ann.to_json()
        if self.ty is not None:
            out["type"] = self.ty.to_json()
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    @staticmethod
    def from_json(obj) -> "Term":
        return Term(
            kind=obj["kind"],
            children=tuple(Term.from_json(c) for c in obj.get("children", ())),
            name=obj.get("name"),
            value=obj.get("value"),
            ann=RmlType.from_json(obj["ann"]) if "ann" in obj else None,
            ty=RmlType.from_json(obj["type"]) if "type" in obj else None,
        )

    def strip(self) -> "Term":
        """Drop types and positions (handy for structural comparison)."""
        return Term(self.kind, tuple(c.strip() for c in self.children),
                    self.name, self.value, self.ann)


# small constructors, mostly for tests and the canonicaliser
def Unit() -> Term:
    return Term("unit")


def Int(i: int) -> Term:
    return Term("int", value=i)


def Var(x: str) -> Term:
    return Term("var", name=x)


def Lam(x: str, t: RmlType, body: Term) -> Term:
    return Term("lam", (body,), name=x, ann=t)


def App(f: Term, a: Term) -> Term:
    return Term("app", (f, a))


def free_vars(t: Term) -> set[str]:
    if t.kind == "var":
        return {t.name}
    if t.kind in ("lam",):
        return free_vars(t.children[0]) - {t.name}
    if t.kind in ("let", "newref", "letapp"):
        *heads, body = t.children
        out = set()
        for h in heads:
            out |= free_vars(h)
        return out | (free_vars(body) - {t.name})
    out = set()
    for c in t.children:
        out |= free_vars(c)
    return out
