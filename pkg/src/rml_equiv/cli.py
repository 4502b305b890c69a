"""Command-line interface: rml-equiv <subcommand> ..."""
from __future__ import annotations

import argparse
import os
import sys

from . import equiv
from .arena import dump_arena, prearena_of_sequent
from .canonical import UnsupportedConstruct, canonicalize, pretty
from .coverability import ResourceLimit, find_witness
from .family import CompileError, FragmentViolation
from .ndcma import accepted_words, to_text
from .rml_lang import (RmlSyntaxError, RmlTypeError, TypeSequent, classify, parse_context,
                       parse_term, parse_type, typecheck)

EXIT_EQUIVALENT, EXIT_INEQUIVALENT, EXIT_UNKNOWN, EXIT_NOT_IN_FRAGMENT = 0, 1, 2, 3
EXIT_USAGE, EXIT_INTERNAL = 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _text(arg: str | None) -> str:
    """A path is read; anything else is taken as literal source text."""
    if arg is None:
        return ""
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load(args, source):
    ctx = parse_context(_text(args.ctx))
    t = typecheck(parse_term(_text(source)), ctx, k=args.int_size)
    return t, TypeSequent(tuple(ctx), t.ty)


def _compiled(args, source):
    t, seq = _load(args, source)
    c = canonicalize(t, list(seq.context))
    frag = equiv.choose_fragment(seq, args.fragment)
    return c, seq, frag, equiv.compile_term(c, seq, args.int_size, frag)


def cmd_check(args):
    t, seq = _load(args, args.term)
    print(seq)
    return 0


def cmd_classify(args):
    if args.type is not None:
        ctx = parse_context(_text(args.ctx))
        seq = TypeSequent(tuple(ctx), parse_type(args.type))
    elif args.term is not None:
        _, seq = _load(args, args.term)
    else:
        raise UsageError("classify needs a term file or --type")
    print(classify(seq).describe())
    return 0


def cmd_canon(args):
    t, seq = _load(args, args.term)
    print(pretty(canonicalize(t, list(seq.context))))
    return 0


def cmd_compile(args):
    c, seq, frag, a = _compiled(args, args.term)
    if args.dump_arena:
        print(dump_arena(prearena_of_sequent(seq, args.int_size)))
    text = to_text(a)
    if args.emit_automaton:
        with open(args.emit_automaton, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"# {frag}: {len(a.names)} states, {a.n_transitions()} transitions -> {args.emit_automaton}")
    else:
        print(f"# fragment {frag}")
        sys.stdout.write(text)
    return 0


def cmd_enumerate(args):
    _, _, _, a = _compiled(args, args.term)
    for w in sorted(accepted_words(a, args.max_len), key=lambda w: (len(w), w.text())):
        print(w.text())
    return 0


def cmd_witness(args):
    if args.other is None:
        _, _, _, a = _compiled(args, args.term)
        w = find_witness(a, args.max_len, args.budget)
    else:
        _, _, _, a = _compiled(args, args.term)
        _, _, _, b = _compiled(args, args.other)
        a, b = equiv.align(a, b)
        w = None
        for x, y in ((a, b), (b, a)):
            v = find_witness(equiv.DifferenceSystem(x, y), args.max_len, args.budget)
            if v is not None and (w is None or len(v) < len(w)):
                w = v
    if w is None:
        print(f"no word of length <= {args.max_len}")
        return 1
    print(w.text())
    return 0


def cmd_decide(args):
    m = _load(args, args.term)
    n = _load(args, args.other)
    if m[1] != n[1]:
        raise UsageError(f"the terms have different sequents: {m[1]} and {n[1]}")
    cm = canonicalize(m[0], list(m[1].context))
    cn = canonicalize(n[0], list(n[1].context))
    v = equiv.decide((cm, m[1]), (cn, n[1]), args.int_size, args.budget, args.fragment)
    print(f"{v.kind} ({v.fragment})")
    if v.kind == equiv.INEQUIVALENT:
        print(f"witness ({'first' if v.accepted_by == 'M' else 'second'} term only): {v.witness.text()}")
        print(f"play: {v.play.render()}")
        return EXIT_INEQUIVALENT
    if v.kind == equiv.UNKNOWN:
        print(v.detail)
        return EXIT_UNKNOWN
    return EXIT_EQUIVALENT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rml-equiv", description="Observational equivalence for finitary RML.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, term=True, other=False):
        if term:
            sp.add_argument("term", help="term file (or literal source)")
        if other:
            sp.add_argument("other", help="second term file (or literal source)")
        sp.add_argument("--ctx", help="context file or literal, e.g. 'f: unit -> unit, x: intref'")
        sp.add_argument("--int-size", type=int, default=3, help="integer modulus k (default 3)")

    def compiling(sp):
        sp.add_argument("--fragment", choices=["pstrict", "rforml"])
        sp.add_argument("--budget", type=int, default=200_000, help="coverability step budget")

    sp = sub.add_parser("check", help="parse and typecheck")
    common(sp)
    sp.set_defaults(func=cmd_check)
    sp = sub.add_parser("classify", help="fragment membership of a sequent")
    sp.add_argument("term", nargs="?")
    sp.add_argument("--ctx")
    sp.add_argument("--type", help="classify ctx ⊢ TYPE instead of a term")
    sp.add_argument("--int-size", type=int, default=3)
    sp.set_defaults(func=cmd_classify)
    sp = sub.add_parser("canon", help="print the canonical form")
    common(sp)
    sp.set_defaults(func=cmd_canon)
    sp = sub.add_parser("compile", help="compile to an automaton")
    common(sp)
    compiling(sp)
    sp.add_argument("--emit-automaton", metavar="FILE", help="write the automaton text to FILE")
    sp.add_argument("--dump-arena", action="store_true", help="also print the prearena")
    sp.set_defaults(func=cmd_compile)
    sp = sub.add_parser("decide", help="decide observational equivalence")
    common(sp, other=True)
    compiling(sp)
    sp.set_defaults(func=cmd_decide)
    sp = sub.add_parser("enumerate", help="accepted canonical words up to a length")
    common(sp)
    compiling(sp)
    sp.add_argument("--max-len", type=int, default=6)
    sp.set_defaults(func=cmd_enumerate)
    sp = sub.add_parser("witness", help="shortest accepted (or distinguishing) word")
    sp.add_argument("term")
    sp.add_argument("other", nargs="?")
    sp.add_argument("--ctx")
    sp.add_argument("--int-size", type=int, default=3)
    compiling(sp)
    sp.add_argument("--max-len", type=int, default=12)
    sp.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RmlSyntaxError, RmlTypeError, UnsupportedConstruct, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (equiv.NotDecidableFragment, FragmentViolation) as e:
        print(f"not in a decidable fragment: {e}", file=sys.stderr)
        return EXIT_NOT_IN_FRAGMENT
    except ResourceLimit as e:
        print(f"unknown: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (CompileError, equiv.MalformedWord, equiv.AmbiguousPointer) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
