import numpy as np
import pytest

from pdlfp.formulas import And, Atom, AtomProg, Box, Choice, ConstFalse, Not, Or, Seq, Star, evaluate, free_atoms, subformulas
from pdlfp.formulas import Test as Tst  # keep pytest from collecting it
from pdlfp.generators import random_formula, random_pdl_formula, random_program
from pdlfp.kripke import (
    FALSUM,
    KripkeFrame,
    eval_formula,
    eval_program,
    model_check,
    pdl_nnf,
    random_frame,
    valuation_frame,
)

from oracles import sem_formula, sem_program, valuations

p, q = Atom("p"), Atom("q")
a, b = AtomProg("a"), AtomProg("b")

K = KripkeFrame(("s0", "s1"), {"p": {"s1"}}, {"a": {("s0", "s1")}, "b": {("s1", "s0")}})
K_EMPTY_P = KripkeFrame(("s0", "s1"), {}, {"a": {("s0", "s1")}})


def test_box_examples():
    assert eval_formula(K, Box(a, p)) == {"s0", "s1"}
    assert eval_formula(K, ConstFalse()) == frozenset()
    assert eval_formula(K_EMPTY_P, Box(a, p)) == {"s1"}


def test_program_examples():
    assert eval_program(K, Star(a)) == {("s0", "s0"), ("s1", "s1"), ("s0", "s1")}
    assert eval_program(K, Tst(ConstFalse())) == frozenset()
    assert eval_program(K, Seq(a, b)) == {("s0", "s0")}
    assert eval_program(K, Choice(a, b)) == {("s0", "s1"), ("s1", "s0")}


def test_model_check():
    assert model_check(K, "s0", Box(a, p))
    assert not model_check(K, "s1", ConstFalse())
    assert model_check(K, "s1", p)
    with pytest.raises(ValueError):
        model_check(K, "s7", p)


def test_frame_validation():
    with pytest.raises(ValueError):
        KripkeFrame(("s0", "s0"))
    with pytest.raises(ValueError):
        KripkeFrame(("s0",), {"p": {"s1"}})
    with pytest.raises(ValueError):
        KripkeFrame(("s0",), {}, {"a": {("s0", "s9")}})


def _random_pair(rng, max_states=8, depth=4):
    frame = random_frame(int(rng.integers(1 << 30)), int(rng.integers(1, max_states + 1)),
                         edge_density=float(rng.uniform(0.1, 0.6)))
    return frame, random_pdl_formula(rng, depth)


def test_agrees_with_set_semantics(rng):
    for _ in range(300):
        frame, f = _random_pair(rng)
        assert eval_formula(frame, f) == sem_formula(frame, f)
        prog = random_program(rng, 4)
        assert eval_program(frame, prog) == sem_program(frame, prog)


def test_star_is_least_fixpoint(rng):
    for _ in range(200):
        frame, _ = _random_pair(rng)
        prog = random_program(rng, 3)
        base = eval_program(frame, prog)
        star = eval_program(frame, Star(prog))
        ident = {(s, s) for s in frame.states}
        step = {(u, w) for (u, v) in base for (x, w) in star if v == x}
        assert star == ident | step
        assert eval_program(frame, Star(Star(prog))) == star
        # least: every pair is reachable by a finite path of base edges
        reach = set(ident)
        while True:
            more = reach | {(u, w) for (u, v) in reach for (x, w) in base if v == x}
            if more == reach:
                break
            reach = more
        assert star == reach


def test_box_duality_and_test_idempotence(rng):
    for _ in range(200):
        frame, f = _random_pair(rng)
        prog = random_program(rng, 3)
        rel = eval_program(frame, prog)
        holds = eval_formula(frame, f)
        failing = set(frame.states) - eval_formula(frame, Box(prog, f))
        assert failing == {u for (u, v) in rel if v not in holds}
        assert eval_program(frame, Seq(Tst(f), Tst(f))) == eval_program(frame, Tst(f))


def test_pl_embedding(rng):
    for _ in range(100):
        f = random_formula(rng, 4, 5, int(rng.integers(0, 3)), const_prob=0.05)
        atoms = free_atoms(f)
        for t in valuations(atoms):
            assert model_check(valuation_frame(t, atoms), "s0", f) == evaluate(f, t)


def test_pdl_nnf_examples():
    assert pdl_nnf(Not(And(p, q))) == Box(Tst(And(p, q)), FALSUM)
    assert pdl_nnf(Not(p)) == Not(p)
    nested = Not(Not(And(p, q)))
    assert pdl_nnf(nested) == Box(Tst(Box(Tst(And(p, q)), FALSUM)), FALSUM)
    rng = np.random.default_rng(5)
    for seed in range(50):
        frame = random_frame(seed, int(rng.integers(1, 6)))
        assert eval_formula(frame, pdl_nnf(nested)) == eval_formula(frame, And(p, q))


def _negations_on_atoms_only(f):
    return all(isinstance(n.child, Atom) for n in subformulas(f) if isinstance(n, Not))


def test_pdl_nnf_equivalence(rng):
    for _ in range(300):
        frame, f = _random_pair(rng, max_states=6, depth=5)
        g = pdl_nnf(f)
        assert _negations_on_atoms_only(g)
        assert eval_formula(frame, g) == eval_formula(frame, f)


def test_sigma_meaning_is_irrelevant():
    f = Not(Or(p, q))
    frame = KripkeFrame(("s0", "s1"), {"__sigma": {"s0"}, "q": {"s1"}})
    assert eval_formula(frame, pdl_nnf(f)) == eval_formula(frame, f) == {"s0"}


def test_random_frame_density_extremes():
    empty = random_frame(1, 3, edge_density=0.0)
    assert empty.props == {} and empty.progs == {}
    full = random_frame(1, 3, edge_density=1.0)
    assert all(v == set(full.states) for v in full.props.values())
    assert set(full.progs) == {"a", "b"}
    assert all(len(rel) == 9 for rel in full.progs.values())
    assert random_frame(7, 5) == random_frame(7, 5)
    with pytest.raises(ValueError):
        random_frame(1, 3, edge_density=1.5)
