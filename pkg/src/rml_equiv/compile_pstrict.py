"""Compilation of the P-strict fragment."""
from __future__ import annotations

from .canonical import validate_canonical
from .compiler import Compiler, gammas, init_letter
from .family import (AutomatonFamily, CompileError, FragmentViolation, InvariantReport,
                     check_invariants, cleanup, final_closure, merge_family, prune,
                     renumber)
from .arena import prearena_of_sequent
from .rml_lang.classify import classify
from .rml_lang.types import TypeSequent

__all__ = ["compile_pstrict", "compile_with", "merge_family", "cleanup", "check_invariants",
           "AutomatonFamily", "InvariantReport", "FragmentViolation", "CompileError"]


def compile_with(encoding: str, t, seq: TypeSequent, k: int = 3) -> AutomatonFamily:
    """Compile every family member; the alphabet is the prearena's moves."""
    if not validate_canonical(t):
        raise FragmentViolation("term is not in canonical form")
    comp = Compiler(encoding, k)
    ctx = list(seq.context)
    members = {}
    level = 0
    alphabet = set(prearena_of_sequent(seq, k).moves)
    for g in gammas(ctx, k):
        p = comp.comp(t, ctx, g)
        p = prune(p)
        final_closure(p)
        alphabet |= p.alphabet
        level = max(level, p.level)
        members[init_letter(g)] = p
    fam = {}
    for g, p in members.items():
        p.level = level
        fam[g] = renumber(p, alphabet, level)
    return AutomatonFamily(fam, frozenset(alphabet), level)


def compile_pstrict(t, seq: TypeSequent, k: int = 3) -> AutomatonFamily:
    if not classify(seq).in_pstrict:
        raise FragmentViolation(f"{seq} is outside the P-strict fragment")
    return compile_with("P", t, seq, k)
