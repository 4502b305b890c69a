"""RML types, type sequents and the order/arity measures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class RmlType:
    kind: str  # "unit" | "int" | "intref" | "arrow"
    dom: "RmlType | None" = None
    cod: "RmlType | None" = None

    def __str__(self) -> str:
        if self.kind != "arrow":
            return self.kind
        d = str(self.dom)
        if self.dom.kind == "arrow":
            d = f"({d})"
        return f"{d} -> {self.cod}"

    def __repr__(self) -> str:
        return f"RmlType({self})"

    @property
    def is_base(self) -> bool:
        return self.kind in ("unit", "int")

    @property
    def is_arrow(self) -> bool:
        return self.kind == "arrow"

    def args(self) -> list["RmlType"]:
        """Argument types of a curried arrow, outermost first."""
        out = []
        t = self
        while t.kind == "arrow":
            out.append(t.dom)
            t = t.cod
        return out

    def result(self) -> "RmlType":
        t = self
        while t.kind == "arrow":
            t = t.cod
        return t

    def to_json(self):
        if self.kind == "arrow":
            return {"arrow": [self.dom.to_json(), self.cod.to_json()]}
        return self.kind

    @staticmethod
    def from_json(obj) -> "RmlType":
        if isinstance(obj, str):
            return {"unit": UNIT, "int": INT, "intref": INTREF}[obj]
        d, c = obj["arrow"]
        return Arrow(RmlType.from_json(d), RmlType.from_json(c))


UNIT = RmlType("unit")
INT = RmlType("int")
INTREF = RmlType("intref")


def Arrow(dom: RmlType, cod: RmlType) -> RmlType:
    return RmlType("arrow", dom, cod)


def arrows(*ts: RmlType) -> RmlType:
    """arrows(a, b, c) == a -> b -> c"""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def order(t: RmlType) -> int:
    if t.kind in ("unit", "int"):
        return 0
    if t.kind == "intref":
        return 1
    return max(order(t.dom) + 1, order(t.cod))


def arity(t: RmlType) -> int:
    if t.kind in ("unit", "int"):
        return 0
    if t.kind == "intref":
        return 1
    return arity(t.cod) + 1


def size(t: RmlType) -> int:
    if t.kind == "arrow":
        return 1 + size(t.dom) + size(t.cod)
    return 1


def all_types(max_size: int) -> Iterator[RmlType]:
    """Every type with at most max_size constructors (for exhaustive checks)."""
    by_size: dict[int, list[RmlType]] = {1: [UNIT, INT, INTREF]}
    for n in range(2, max_size + 1):
        acc = []
        for ld in range(1, n - 1):
            rd = n - 1 - ld
            for d in by_size.get(ld, []):
                for c in by_size.get(rd, []):
                    acc.append(Arrow(d, c))
        by_size[n] = acc
    for n in range(1, max_size + 1):
        yield from by_size[n]


@dataclass(frozen=True)
class TypeSequent:
    context: tuple  # tuple of (name, RmlType)
    subject: RmlType

    def __post_init__(self):
        names = [n for n, _ in self.context]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate context names: {names}")
        object.__setattr__(self, "context", tuple((n, t) for n, t in self.context))

    def __str__(self) -> str:
        ctx = ", ".join(f"{n}:{t}" for n, t in self.context)
        return f"{ctx} |- {self.subject}".strip()
