"""Compilation of the RML01 fragment, with source/target pointer tags."""
from __future__ import annotations

from .compile_pstrict import compile_with
from .family import AutomatonFamily, FragmentViolation
from .rml_lang.classify import classify
from .rml_lang.types import TypeSequent


def compile_rforml(t, seq: TypeSequent, k: int = 3) -> AutomatonFamily:
    if not classify(seq).in_rforml:
        raise FragmentViolation(f"{seq} is outside RML01")
    return compile_with("R", t, seq, k)


def decode_tagging(a, p, w):
    """Pointer assignment of an accepted word, resolving tags by probing `a`."""
    from .equiv import decode_tagging as _decode
    return _decode(a, p, w)
