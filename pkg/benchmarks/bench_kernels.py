"""Numba kernels against their numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py [--repeats N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from pdlfp import _kernels
from pdlfp.formulas import Atom, Not, conj
from pdlfp.generators import atom_names, random_formula


def best_of(fn, repeats: int) -> float:
    fn()  # warm-up, includes JIT compilation
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    n = 20
    # unsatisfiable, so first_model scans all 2**20 valuations
    body = random_formula(rng, n, 8, 2)
    names = atom_names(n)
    f = conj(body, Not(body), *(Atom(a) for a in names[:1]))
    ops, args = _kernels.compile_formula(f, {a: i for i, a in enumerate(names)})
    rows = rng.random((1 << 16, n)) < 0.5
    r = rng.random((300, 300)) < 0.01
    s = rng.random((300, 300)) < 0.05
    v = rng.random(300) < 0.5
    yield "first_model 2^20", lambda impl: impl["first_model"](ops, args, n, 0, 1 << n)
    yield "eval_rows 65536x20", lambda impl: impl["eval_rows"](ops, args, rows)
    yield "bool_matmul 300", lambda impl: impl["bool_matmul"](r, s)
    yield "closure 300", lambda impl: impl["closure"](r)
    yield "preimage 300", lambda impl: impl["preimage"](r, v)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = sorted(_kernels.IMPLEMENTATIONS)
    print("kernel," + ",".join(f"{b}_ms" for b in backends) + ",speedup")
    for name, call in cases(np.random.default_rng(args.seed)):
        times = {b: best_of(lambda: call(_kernels.IMPLEMENTATIONS[b]), args.repeats) for b in backends}
        ratio = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(name + "," + ",".join(f"{times[b] * 1e3:.2f}" for b in backends) + f",{ratio:.1f}x")


if __name__ == "__main__":
    main()
