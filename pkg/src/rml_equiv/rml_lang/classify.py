"""Fragment membership and undecidability patterns, computed from types only."""
from __future__ import annotations

from dataclasses import dataclass

from .types import RmlType, TypeSequent, arity, order

THIRD_ORDER = "ThirdOrder"
TWO_FIRST_ORDER_ARGS = "TwoFirstOrderArgs"
NON_FINAL_FIRST_ORDER_ARG = "NonFinalFirstOrderArg"
LHS_FOURTH_ORDER = "LhsFourthOrder"

REASON_TEXT = {
    THIRD_ORDER: "third-order type on the right",
    TWO_FIRST_ORDER_ARGS: "two first-order arguments",
    NON_FINAL_FIRST_ORDER_ARG: "non-final first-order argument",
    LHS_FOURTH_ORDER: "fourth-order context type",
}


@dataclass(frozen=True)
class FragmentClass:
    in_pstrict: bool
    in_rforml: bool
    undecidable_reason: str | None
    unknown: bool
    # decidable by a procedure outside this tool (O-strict sequents)
    ostrict: bool = False

    def describe(self) -> str:
        if self.undecidable_reason:
            return "undecidable: " + REASON_TEXT[self.undecidable_reason]
        parts = []
        if self.in_pstrict:
            parts.append("pstrict")
        if self.in_rforml:
            parts.append("rforml")
        if parts:
            return "decidable: " + ", ".join(parts)
        if self.ostrict:
            return "unknown: O-strict (decidable elsewhere, not handled here)"
        return "unknown"


def is_theta0(t: RmlType) -> bool:
    return t.is_base


def is_theta1(t: RmlType) -> bool:
    """Θ1 ::= Θ0 | Θ0 → Θ1 | intref"""
    if t.is_base or t.kind == "intref":
        return True
    return t.is_arrow and t.dom.is_base and is_theta1(t.cod)


def is_pstrict_ctx(t: RmlType) -> bool:
    """Θ̂1 ::= Θ0 | Θ1 → Θ0 | intref"""
    if t.is_base or t.kind == "intref":
        return True
    return t.is_arrow and is_theta1(t.dom) and t.cod.is_base


def is_theta11(t: RmlType) -> bool:
    """Θ1¹ ::= Θ0 | Θ0 → Θ0 | intref"""
    if t.is_base or t.kind == "intref":
        return True
    return t.is_arrow and t.dom.is_base and t.cod.is_base


def is_rforml_ctx(t: RmlType) -> bool:
    """Θ2¹ ::= Θ1 | Θ1¹ → Θ2¹"""
    if is_theta1(t):
        return True
    return t.is_arrow and is_theta11(t.dom) and is_rforml_ctx(t.cod)


def _short(t: RmlType) -> bool:
    return order(t) <= 2 and arity(t) <= 1


def rhs_undecidable(t: RmlType) -> str | None:
    """Undecidability pattern for a type on the right of the turnstile."""
    o = order(t)
    if o >= 3:
        return THIRD_ORDER
    if o == 2:
        args = t.args()
        fo = [i for i, a in enumerate(args) if order(a) >= 1]
        if len(fo) >= 2:
            return TWO_FIRST_ORDER_ARGS
        if len(fo) == 1 and len(args) >= 2 and fo[0] != len(args) - 1:
            return NON_FINAL_FIRST_ORDER_ARG
    return None


def lhs_undecidable(t: RmlType) -> str | None:
    """A context type is hopeless when one of its arguments is hopeless on the right."""
    for a in t.args():
        if order(a) >= 3:
            return LHS_FOURTH_ORDER
        r = rhs_undecidable(a)
        if r:
            return r
    return None


def classify(seq: TypeSequent) -> FragmentClass:
    ctx = [t for _, t in seq.context]
    subj = seq.subject
    reason = rhs_undecidable(subj)
    if reason is None:
        for t in ctx:
            reason = lhs_undecidable(t)
            if reason:
                break
    ps = is_theta1(subj) and all(is_pstrict_ctx(t) for t in ctx)
    rf = is_theta1(subj) and all(is_rforml_ctx(t) for t in ctx)
    ostrict = (_short(subj) and all(_short(a) for a in subj.args())
               and all(_short(t) and all(_short(a) for a in t.args()) for t in ctx))
    if reason:
        ps = rf = ostrict = False
    return FragmentClass(ps, rf, reason, unknown=not (ps or rf or reason), ostrict=ostrict)
