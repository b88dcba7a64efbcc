import pytest

from pdlfp.formulas import And, Atom, AtomProg, Box, ConstFalse, ConstTrue, Implies, Not, Or, evaluate, free_atoms, subformulas
from pdlfp.generators import random_formula
from pdlfp.normal_forms import CapExceeded, neg, pos, simplify_constants, to_cnf, to_dnf, to_nnf
from pdlfp.parser import print_formula

from oracles import valuations

p, q, r = Atom("p"), Atom("q"), Atom("r")


def clause_sets(cnf):
    return {c for c in cnf.clauses}


@pytest.mark.parametrize(
    "f, expected",
    [
        (Not(And(p, q)), Or(Not(p), Not(q))),
        (Not(Not(p)), p),
        (Not(ConstFalse()), ConstTrue()),
        (Implies(p, q), Or(Not(p), q)),
        (Not(Implies(p, q)), And(p, Not(q))),
    ],
)
def test_nnf_examples(f, expected):
    assert to_nnf(f) == expected


def test_const_true_prints_as_negated_zero():
    assert print_formula(to_nnf(Not(ConstFalse()))) == "~0"


def test_nnf_rejects_boxes():
    with pytest.raises(TypeError):
        to_nnf(Box(AtomProg("a"), p))


@pytest.mark.parametrize(
    "f, expected",
    [
        (Or(And(p, q), r), {frozenset({pos("p"), pos("r")}), frozenset({pos("q"), pos("r")})}),
        (And(p, q), {frozenset({pos("p")}), frozenset({pos("q")})}),
        (Or(p, Not(p)), set()),
        (ConstFalse(), {frozenset()}),
    ],
)
def test_cnf_examples(f, expected):
    assert clause_sets(to_cnf(f)) == expected


@pytest.mark.parametrize(
    "f, expected",
    [
        (Not(And(p, q)), {frozenset({neg("p")}), frozenset({neg("q")})}),
        (And(p, Or(q, r)), {frozenset({pos("p"), pos("q")}), frozenset({pos("p"), pos("r")})}),
        (ConstFalse(), set()),
    ],
)
def test_dnf_examples(f, expected):
    assert set(to_dnf(f).terms) == expected


def _random(rng, k=None):
    n = int(rng.integers(1, 9))
    depth = int(rng.integers(1, 7))
    k = int(rng.integers(0, min(depth, 3) + 1)) if k is None else k
    ops = (And, Or, Implies) if rng.random() < 0.3 else (And, Or)
    return random_formula(rng, n, depth, k, ops=ops, const_prob=0.05)


def test_exhaustive_equivalence(rng):
    for _ in range(400):
        f = _random(rng)
        cnf, dnf, nnf = to_cnf(f), to_dnf(f), to_nnf(f)
        for t in valuations(free_atoms(f)):
            want = evaluate(f, t)
            assert cnf.evaluate(t) == want
            assert dnf.evaluate(t) == want
            assert evaluate(nnf, t) == want
            assert evaluate(cnf.to_formula(), t) == want


def test_nnf_shape(rng):
    for _ in range(300):
        g = to_nnf(_random(rng))
        for node in subformulas(g):
            assert not isinstance(node, Implies)
            if isinstance(node, Not):
                assert isinstance(node.child, Atom)


def test_nnf_size_is_linear(rng):
    for _ in range(300):
        f = _random(rng)
        assert sum(1 for _ in subformulas(to_nnf(f))) <= 2 * sum(1 for _ in subformulas(f))


def test_absorption_and_no_tautologies(rng):
    for _ in range(300):
        cnf = to_cnf(_random(rng))
        cs = cnf.clauses
        assert len(set(cs)) == len(cs)
        for i, c in enumerate(cs):
            assert not any(~l in c for l in c)
            for j, d in enumerate(cs):
                if i != j:
                    assert not c < d


def test_cap_exceeded():
    # (x0 & y0) | (x1 & y1) | ... distributes into 2**n clauses
    f = ConstFalse()
    for i in range(6):
        f = Or(f, And(Atom(f"x{i}"), Atom(f"y{i}")))
    assert len(to_cnf(f)) == 64
    with pytest.raises(CapExceeded) as info:
        to_cnf(f, clause_cap=10)
    assert info.value.cap == 10 and info.value.reached > 10
    with pytest.raises(CapExceeded):
        to_dnf(Not(f), term_cap=10)


def test_simplify_constants():
    assert simplify_constants(And(p, ConstFalse())) == ConstFalse()
    assert simplify_constants(Or(p, ConstFalse())) == p
    assert simplify_constants(Or(p, ConstTrue())) == ConstTrue()
