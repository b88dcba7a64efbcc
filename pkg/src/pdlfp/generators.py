"""Seeded random instances for oracle tests, the CLI and benchmarks."""

from __future__ import annotations

import numpy as np

from .formulas import (
    And,
    Atom,
    AtomProg,
    Box,
    Choice,
    ConstFalse,
    Formula,
    Implies,
    Not,
    Or,
    Program,
    Seq,
    Star,
    Test,
)
from .normal_forms import CnfFormula, Literal
from .schaefer import XorSystem


def atom_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


def random_formula(
    rng: np.random.Generator,
    n_atoms: int = 6,
    depth: int = 6,
    negations: int = 0,
    ops: tuple = (And, Or),
    const_prob: float = 0.0,
) -> Formula:
    """Propositional formula with exactly ``negations`` Not nodes and depth <= ``depth``."""
    if negations > depth:
        raise ValueError("need depth >= negations")
    names = atom_names(n_atoms)

    def leaf() -> Formula:
        if const_prob and rng.random() < const_prob:
            return ConstFalse()
        return Atom(names[rng.integers(n_atoms)])

    def gen(d: int, k: int) -> Formula:
        if k and (d == k or rng.random() < 0.3):
            return Not(gen(d - 1, k - 1))
        if d == 0 or (k == 0 and rng.random() < 0.25):
            return leaf()
        lo = max(0, k - (d - 1))
        hi = min(k, d - 1)
        k1 = int(rng.integers(lo, hi + 1))
        op = ops[rng.integers(len(ops))]
        return op(gen(d - 1, k1), gen(d - 1, k - k1))

    return gen(depth, negations)


def _balanced(op, items: list) -> Formula:
    while len(items) > 1:
        items = [op(items[i], items[i + 1]) if i + 1 < len(items) else items[i]
                 for i in range(0, len(items), 2)]
    return items[0]


def sized_and_only(
    rng: np.random.Generator, n_atoms: int, k: int, worst_case: bool = False
) -> Formula:
    """AND-only formula over ``n_atoms`` atoms with exactly ``k`` negations.

    Atoms are dealt into nonempty blocks; every block but the first hangs
    under a Not inside a randomly chosen earlier block. With ``worst_case``
    the k-th negation instead refutes the conjunction of the top block's
    atoms, which makes the formula unsatisfiable and forces a solver to try
    every guess.
    """
    if worst_case:
        if k < 1:
            raise ValueError("worst_case needs k >= 1")
        body = sized_and_only(rng, n_atoms, k - 1)
        top = [n for n in _conjuncts(body) if isinstance(n, Atom)]
        return And(body, Not(_balanced(And, top)))
    if n_atoms < k + 1:
        raise ValueError("need at least k + 1 atoms")
    names = atom_names(n_atoms)
    perm = rng.permutation(n_atoms)
    cuts = np.sort(rng.choice(np.arange(1, n_atoms), size=k, replace=False)) if k else []
    groups = np.split(perm, cuts)
    parent = [-1] + [int(rng.integers(i)) for i in range(1, k + 1)]

    def build(b: int) -> Formula:
        items = [Atom(names[i]) for i in groups[b]]
        items += [Not(build(c)) for c in range(b + 1, k + 1) if parent[c] == b]
        rng.shuffle(items)
        return _balanced(And, items)

    return build(0)


def _conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def random_program(rng: np.random.Generator, depth: int, atoms=("p", "q"), progs=("a", "b")) -> Program:
    if depth <= 0 or rng.random() < 0.3:
        return AtomProg(progs[rng.integers(len(progs))])
    kind = rng.integers(4)
    if kind == 0:
        return Seq(random_program(rng, depth - 1, atoms, progs), random_program(rng, depth - 1, atoms, progs))
    if kind == 1:
        return Choice(random_program(rng, depth - 1, atoms, progs), random_program(rng, depth - 1, atoms, progs))
    if kind == 2:
        return Star(random_program(rng, depth - 1, atoms, progs))
    return Test(random_pdl_formula(rng, depth - 1, atoms, progs))


def random_pdl_formula(
    rng: np.random.Generator, depth: int, atoms=("p", "q"), progs=("a", "b")
) -> Formula:
    """Any PDL formula: constants, all connectives, boxes over random programs."""
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.1:
            return ConstFalse()
        return Atom(atoms[rng.integers(len(atoms))])
    kind = rng.integers(6)
    if kind == 0:
        return Not(random_pdl_formula(rng, depth - 1, atoms, progs))
    if kind == 4:
        return Box(random_program(rng, depth - 1, atoms, progs), random_pdl_formula(rng, depth - 1, atoms, progs))
    if kind == 5 and rng.random() < 0.5:
        return Not(random_pdl_formula(rng, depth - 1, atoms, progs))
    op = (And, Or, Implies, And, Or, Or)[kind]
    return op(random_pdl_formula(rng, depth - 1, atoms, progs), random_pdl_formula(rng, depth - 1, atoms, progs))


def random_cnf(
    rng: np.random.Generator,
    n_atoms: int,
    n_clauses: int,
    width: int = 3,
    max_pos: int | None = None,
    max_neg: int | None = None,
) -> CnfFormula:
    """Random nonempty clauses with at most ``width`` literals and polarity caps."""
    names = atom_names(n_atoms)
    clauses = []
    for _ in range(n_clauses):
        size = int(rng.integers(1, width + 1))
        chosen = rng.choice(n_atoms, size=min(size, n_atoms), replace=False)
        lits = []
        npos = nneg = 0
        for i in chosen:
            positive = bool(rng.random() < 0.5)
            if positive and max_pos is not None and npos >= max_pos:
                positive = False
            if not positive and max_neg is not None and nneg >= max_neg:
                positive = True
                if max_pos is not None and npos >= max_pos:
                    continue
            npos += positive
            nneg += not positive
            lits.append(Literal(names[i], positive))
        if lits:
            clauses.append(lits)
    return CnfFormula(clauses)


def random_xor(rng: np.random.Generator, n_vars: int, n_equations: int) -> XorSystem:
    names = atom_names(n_vars)
    eqs = []
    for _ in range(n_equations):
        mask = rng.random(n_vars) < 0.35
        eqs.append(({names[i] for i in np.flatnonzero(mask)}, int(rng.integers(2))))
    return XorSystem(eqs, names)
