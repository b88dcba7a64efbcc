import numpy as np
import pytest

from pdlfp import _kernels
from pdlfp.generators import random_formula
from pdlfp.formulas import And, Implies, Or, free_atoms

import oracles

BACKENDS = sorted(_kernels.IMPLEMENTATIONS)


def test_both_backends_present():
    assert "numpy" in _kernels.IMPLEMENTATIONS


@pytest.mark.parametrize("backend", BACKENDS)
def test_first_model_matches_oracle(rng, backend):
    impl = _kernels.IMPLEMENTATIONS[backend]
    for _ in range(150):
        f = random_formula(rng, int(rng.integers(1, 9)), 5, int(rng.integers(0, 4)),
                           ops=(And, Or, Implies), const_prob=0.05)
        atoms = sorted(free_atoms(f))
        ops, args = _kernels.compile_formula(f, {x: i for i, x in enumerate(atoms)})
        code = impl["first_model"](ops, args, len(atoms), 0, 1 << len(atoms))
        want = oracles.first_model(f)
        if want is None:
            assert code == -1
        else:
            n = len(atoms)
            got = {x for i, x in enumerate(atoms) if (code >> (n - 1 - i)) & 1}
            assert got == want


def test_relation_kernels_agree(rng):
    names = BACKENDS
    for _ in range(100):
        n = int(rng.integers(1, 12))
        r = rng.random((n, n)) < 0.2
        s = rng.random((n, n)) < 0.3
        v = rng.random(n) < 0.5
        outs = {}
        for name in names:
            impl = _kernels.IMPLEMENTATIONS[name]
            outs[name] = (
                impl["bool_matmul"](r, s),
                impl["closure"](r),
                impl["preimage"](r, v),
            )
        star = r | np.eye(n, dtype=bool)
        for k in range(n):  # Warshall
            star = star | (star[:, [k]] & star[[k], :])
        ref = (r.astype(int) @ s.astype(int) > 0, star, r.astype(int) @ v.astype(int) > 0)
        for got in outs.values():
            for x, y in zip(got, ref):
                assert np.array_equal(x, y)


def test_eval_rows_agree(rng):
    for _ in range(50):
        f = random_formula(rng, 6, 5, 2, const_prob=0.1)
        atoms = sorted(free_atoms(f))
        ops, args = _kernels.compile_formula(f, {x: i for i, x in enumerate(atoms)})
        rows = rng.random((64, len(atoms))) < 0.5
        outs = [_kernels.IMPLEMENTATIONS[b]["eval_rows"](ops, args, rows) for b in BACKENDS]
        for out in outs:
            assert np.array_equal(out, outs[0])


@pytest.mark.parametrize("backend", BACKENDS)
def test_first_model_respects_window(rng, backend):
    impl = _kernels.IMPLEMENTATIONS[backend]
    for _ in range(100):
        n = int(rng.integers(1, 10))
        f = random_formula(rng, n, 5, int(rng.integers(0, 3)))
        atoms = sorted(free_atoms(f))
        n = len(atoms)
        ops, args = _kernels.compile_formula(f, {x: i for i, x in enumerate(atoms)})
        lo = int(rng.integers(0, 1 << n))
        hi = int(rng.integers(lo, (1 << n) + 1))
        table = oracles.truth_table(atoms)
        hits = [c for c in range(lo, hi) if oracles.evaluate(f, oracles.rows_to_set(table[c], atoms))]
        assert impl["first_model"](ops, args, n, lo, hi) == (hits[0] if hits else -1)
