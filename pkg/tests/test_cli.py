import subprocess
import sys

import pytest

from rml_equiv.cli import main
from corpus import COUNTER


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_undecidable(capsys):
    code, out, _ = run(capsys, "classify", "--type", "(unit -> unit) -> unit -> unit")
    assert code == 0
    assert out == "undecidable: non-final first-order argument\n"


def test_classify_term(capsys, tmp_path):
    f = tmp_path / "m.rml"
    f.write_text("f ()")
    code, out, _ = run(capsys, "classify", str(f), "--ctx", "f: unit -> unit")
    assert code == 0 and out == "decidable: pstrict, rforml\n"


def test_check_and_canon(capsys):
    code, out, _ = run(capsys, "check", "fun x:int. succ x")
    assert code == 0 and out.strip() == "|- int -> int"
    code, out, _ = run(capsys, "canon", "succ 3", "--int-size", "5")
    assert code == 0 and out.startswith("let ")


def test_decide_exit_codes(capsys):
    assert run(capsys, "decide", "f ()", "f (); ()", "--ctx", "f: unit -> unit")[0] == 0
    code, out, _ = run(capsys, "decide", "!x", "!x; !x", "--ctx", "x: intref", "--int-size", "2")
    assert code == 1
    assert "witness" in out and "play: 0:q0" in out
    code, _, err = run(capsys, "decide", "fun f:unit -> unit. f ()", "fun f:unit -> unit. ()")
    assert code == 3 and "not in a decidable fragment" in err
    code, out, _ = run(capsys, "decide", COUNTER, "let c = ref 0 in fun y:unit. if !c = 0 then c := 1 else omega",
                       "--int-size", "2", "--budget", "1")
    assert code == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 64
    assert run(capsys, "check", "1 +")[0] == 64
    assert run(capsys, "check", "x")[0] == 64
    assert run(capsys, "decide", "1", "()")[0] == 64


def test_compile_output_stable(capsys, tmp_path):
    code, out1, _ = run(capsys, "compile", COUNTER, "--int-size", "2")
    code2, out2, _ = run(capsys, "compile", COUNTER, "--int-size", "2")
    assert code == code2 == 0 and out1 == out2
    assert out1.splitlines()[1] == "level 1"
    target = tmp_path / "a.wndcma"
    code, out, _ = run(capsys, "compile", COUNTER, "--int-size", "2", "--emit-automaton", str(target),
                       "--dump-arena")
    assert code == 0 and out.startswith("digraph prearena")
    assert target.read_text() == "\n".join(out1.splitlines()[1:]) + "\n"


def test_enumerate_and_witness(capsys):
    code, out, _ = run(capsys, "enumerate", COUNTER, "--int-size", "2", "--max-len", "4")
    assert code == 0 and out.splitlines() == ["ε", "q0@0 a0@0", "q0@0 a0@0 q1@1(0) a1@1(0)"]
    code, out, _ = run(capsys, "witness", COUNTER, "fun y:unit. omega", "--int-size", "2")
    assert code == 0 and out.strip() == "q0@0 a0@0 q1@1(0) a1@1(0)"
    code, out, _ = run(capsys, "witness", "fun y:unit. ()", "fun y:unit. ()", "--max-len", "6")
    assert code == 1


def test_entry_point():
    r = subprocess.run([sys.executable, "-m", "rml_equiv.cli", "classify", "--type", "unit -> unit"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "decidable: pstrict, rforml\n"
