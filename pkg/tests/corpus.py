"""Shared term corpus: groups of terms over a common sequent.

Each entry is (name, source).  `EXPECTED` records the hand-known verdict of
selected pairs.
"""

COUNTER = "let c = ref 0 in fun y:unit. if !c = 0 then c := 1 else omega"
COUNTER_PER_THREAD = "fun x:unit. let c = ref 0 in fun y:unit. if !c = 0 then c := 1 else omega"

GROUPS = {
    "unit_fn": dict(ctx="", k=2, terms=[
        ("counter", COUNTER),
        ("diverge", "fun y:unit. omega"),
        ("skip", "fun y:unit. ()"),
        ("write_local", "let c = ref 0 in fun y:unit. c := 1"),
    ]),
    "int_fn": dict(ctx="", k=3, terms=[
        ("ident", "fun x:int. x"),
        ("succ_pred", "fun x:int. succ (pred x)"),
        ("succ", "fun x:int. succ x"),
    ]),
    "call_unit": dict(ctx="f: unit -> unit", k=2, terms=[
        ("call", "f ()"),
        ("call_skip", "f (); ()"),
        ("call_twice", "f (); f ()"),
        ("call_local", "let c = ref 0 in f (); c := 1"),
    ]),
    "read_var": dict(ctx="x: intref", k=2, terms=[
        ("read", "!x"),
        ("read_twice", "!x; !x"),
        ("read_write", "let y = !x in x := y; y"),
    ]),
    "callback": dict(ctx="f: (unit -> unit) -> unit", k=2, terms=[
        ("cb_skip", "f (fun u:unit. ())"),
        ("cb_local", "let c = ref 0 in f (fun u:unit. c := 1)"),
        ("cb_diverge", "f (fun u:unit. omega)"),
    ]),
    "curried": dict(ctx="f: unit -> unit -> unit", k=2, terms=[
        ("same_twice", "let g = f () in g (); g ()"),
        ("in_order", "let g = f () in let h = f () in g (); h ()"),
        ("reversed", "let g = f () in let h = f () in h (); g ()"),
    ]),
    "nested_fn": dict(ctx="", k=2, terms=[
        ("per_thread", COUNTER_PER_THREAD),
        ("shared", "let c = ref 0 in fun x:unit. fun y:unit. if !c = 0 then c := 1 else omega"),
    ]),
    "loop": dict(ctx="x: intref", k=2, terms=[
        ("count_down", "while !x do x := pred !x"),
        ("reset", "x := 0"),
    ]),
    "bad_var": dict(ctx="f: intref -> unit", k=2, terms=[
        ("const_var", "f (mkvar (fun u:unit. 1) (fun v:int. ()))"),
        ("good_var", "let c = ref 1 in f c"),
    ]),
}

# pairs whose verdict is known by hand (unordered)
EXPECTED = {
    ("unit_fn", "counter", "diverge"): False,
    ("unit_fn", "skip", "write_local"): True,
    ("unit_fn", "counter", "skip"): False,
    ("int_fn", "ident", "succ_pred"): True,
    ("int_fn", "ident", "succ"): False,
    ("call_unit", "call", "call_skip"): True,
    ("call_unit", "call", "call_local"): True,
    ("call_unit", "call", "call_twice"): False,
    ("read_var", "read", "read_twice"): False,
    ("read_var", "read", "read_write"): False,
    ("callback", "cb_skip", "cb_local"): True,
    ("callback", "cb_skip", "cb_diverge"): False,
    ("curried", "in_order", "reversed"): False,
    ("curried", "same_twice", "in_order"): False,
    ("nested_fn", "per_thread", "shared"): False,
    ("loop", "count_down", "reset"): False,
    ("bad_var", "const_var", "good_var"): False,
}


def all_terms():
    for g, spec in GROUPS.items():
        for name, src in spec["terms"]:
            yield g, name, src, spec["ctx"], spec["k"]


def ordered_pairs():
    for g, spec in GROUPS.items():
        ts = spec["terms"]
        for a in ts:
            for b in ts:
                if a is not b:
                    yield g, a, b, spec["ctx"], spec["k"]
