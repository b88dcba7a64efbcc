import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdlfp.formulas import (
    And,
    Atom,
    ConstFalse,
    Fragment,
    FragmentClass,
    Implies,
    Not,
    Or,
    SatResult,
    checked,
    classify_fragment,
    count_negations,
    evaluate,
    free_atoms,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")

POS = FragmentClass(Fragment.POSITIVE)


def AO(k):
    return FragmentClass(Fragment.AND_ONLY, k)


def OO(k):
    return FragmentClass(Fragment.OR_ONLY, k)


def GEN(k):
    return FragmentClass(Fragment.GENERAL, k)


@pytest.mark.parametrize(
    "f, expected",
    [(p, 0), (Not(And(p, q)), 1), (Not(Not(p)), 2), (Implies(p, q), 0)],
)
def test_count_negations(f, expected):
    assert count_negations(f) == expected


@pytest.mark.parametrize(
    "f, expected",
    [(And(p, Or(q, p)), {"p", "q"}), (ConstFalse(), set()), (Not(p), {"p"})],
)
def test_free_atoms(f, expected):
    assert free_atoms(f) == expected


def test_evaluate_examples():
    assert evaluate(Or(p, q), {"q"})
    assert not evaluate(ConstFalse(), {"p", "q"})
    assert evaluate(Implies(p, q), set())
    assert not evaluate(Implies(p, q), {"p"})


@pytest.mark.parametrize(
    "f, expected",
    [
        (And(p, q), {POS, AO(0), GEN(0)}),
        (Not(And(p, q)), {AO(1), GEN(1)}),
        (Or(p, Not(And(q, r))), {GEN(1)}),
        (p, {POS, AO(0), OO(0), GEN(0)}),
        (Not(Or(p, q)), {OO(1), GEN(1)}),
        (And(p, ConstFalse()), {AO(0), GEN(0)}),
        (Implies(p, q), {GEN(0)}),
    ],
)
def test_classify_fragment(f, expected):
    assert classify_fragment(f) == expected


def test_fragment_class_rules():
    with pytest.raises(ValueError):
        FragmentClass(Fragment.POSITIVE, 1)
    with pytest.raises(ValueError):
        FragmentClass(Fragment.GENERAL, -1)
    assert str(AO(3)) == "AndOnly(3)"
    assert sorted([GEN(0), POS, AO(1)]) == [AO(1), GEN(0), POS]


def test_atom_names_are_identifiers():
    for bad in ["", "1x", "a-b", "0"]:
        with pytest.raises(ValueError):
            Atom(bad)


def test_structural_equality_and_hash():
    assert And(p, Not(q)) == And(Atom("p"), Not(Atom("q")))
    assert And(p, q) != And(q, p)
    assert len({And(p, q), And(Atom("p"), Atom("q"))}) == 1


def test_checked_rejects_bad_witness(monkeypatch):
    monkeypatch.setenv("PDLFP_CHECK_WITNESS", "1")
    with pytest.raises(AssertionError):
        checked(And(p, q), SatResult.of({"p"}))
    assert checked(And(p, q), SatResult.of({"p", "q"})).sat


NAMES = [f"x{i}" for i in range(10)]
atoms = st.sampled_from(NAMES).map(Atom)


def formulas(leaves, ops):
    return st.recursive(
        leaves,
        lambda kids: st.one_of(*[st.builds(op, kids, kids) for op in ops]),
        max_leaves=24,
    )


positive = formulas(atoms, [And, Or])
general = st.recursive(
    st.one_of(atoms, st.just(ConstFalse())),
    lambda kids: st.one_of(
        st.builds(Not, kids), st.builds(And, kids, kids), st.builds(Or, kids, kids),
        st.builds(Implies, kids, kids),
    ),
    max_leaves=20,
)
valuation = st.frozensets(st.sampled_from(NAMES))


def _mirror(f):
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_mirror(f.right), _mirror(f.left))
    if isinstance(f, Not):
        return Not(_mirror(f.child))
    return f


@given(general)
def test_negation_count_ignores_child_order(f):
    assert count_negations(_mirror(f)) == count_negations(f)


@given(positive, valuation, valuation)
@settings(max_examples=300)
def test_positive_formulas_are_monotone(f, t1, extra):
    t2 = t1 | extra
    if evaluate(f, t1):
        assert evaluate(f, t2)


@given(general, valuation, st.frozensets(st.sampled_from(["y0", "y1"])))
def test_evaluate_ignores_foreign_atoms(f, t, junk):
    assert evaluate(f, t) == evaluate(f, t & free_atoms(f)) == evaluate(f, t | junk)
