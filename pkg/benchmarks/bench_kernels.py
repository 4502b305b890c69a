"""Compare the compiled forest kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times forest_from_memory and embed_forest on random memories, then an
end-to-end emptiness check run once per implementation in a subprocess
(the implementation is chosen at import via RML_EQUIV_PURE).
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from rml_equiv import _kernels_py

try:
    from rml_equiv import _kernels
except ImportError:
    _kernels = None


def random_memory(rng, size, labels=4, depth=3):
    mem = {}
    frontier = [()]
    nxt = 0
    while len(mem) < size:
        parent = rng.choice(frontier)
        if len(parent) >= depth:
            continue
        ch = parent + (nxt,)
        nxt += 1
        mem[ch] = rng.randrange(labels)
        frontier.append(ch)
    return mem


def kernel_workload(impl, pairs):
    for m1, m2 in pairs:
        f1 = impl.forest_from_memory(m1)
        f2 = impl.forest_from_memory(m2)
        impl.embed_forest(f1, f2)


EMPTINESS = (
    "import sys; sys.path.insert(0, 'tests'); import time\n"
    "from rml_equiv.kernels import IMPLEMENTATION\n"
    "from rml_equiv.coverability import is_empty\n"
    "from cases import random_deterministic\n"
    "t = time.perf_counter()\n"
    "for s in range(20): is_empty(random_deterministic(s, ('a', 'b'), 1, n_states=4))\n"
    "print(IMPLEMENTATION, time.perf_counter() - t)\n"
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--pairs", type=int, default=400)
    args = ap.parse_args()

    rng = random.Random(0)
    pairs = [(random_memory(rng, rng.randint(2, 10)), random_memory(rng, rng.randint(6, 16)))
             for _ in range(args.pairs)]
    impls = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    times = {}
    for name, impl in impls:
        times[name] = min(timeit.repeat(lambda: kernel_workload(impl, pairs), number=1, repeat=args.repeat))
        print(f"kernels   {name:7s} {times[name] * 1000:8.1f} ms  ({args.pairs} memory pairs)")
    if "cython" in times:
        print(f"kernels   speedup {times['python'] / times['cython']:.2f}x")

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for pure in ("1", ""):
        env = dict(os.environ, RML_EQUIV_PURE=pure)
        out = subprocess.run([sys.executable, "-c", EMPTINESS], cwd=root, env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"is_empty  {out[0]:7s} {float(out[1]) * 1000:8.1f} ms  (20 random automata)")


if __name__ == "__main__":
    main()
