"""Satisfiability for negation-restricted fragments, parameterized by the
number of ``Not`` nodes, plus the brute-force oracle they are checked against.

The solvers share one idea. Cut the formula at every ``Not`` into
negation-free blocks, guess the truth value of each negated block, and note
that each guess leaves only monotone constraints: some blocks must be true,
the others false. A monotone formula that is true somewhere is true on every
superset, and one that is false somewhere is false on every subset, so a
single extremal valuation per guess (or per clause choice) decides it.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable

import numpy as np

from . import _kernels
from .formulas import (
    And,
    Atom,
    Box,
    ConstFalse,
    ConstTrue,
    Formula,
    Fragment,
    Implies,
    Not,
    NotInFragment,
    Or,
    SatResult,
    checked,
    classify_fragment,
    count_negations,
    evaluate,
    free_atoms,
    has_fragment,
    is_monotone,
    subformulas,
)
from .normal_forms import (
    DEFAULT_CAP,
    CnfFormula,
    DnfFormula,
    simplify_constants,
    to_cnf,
    to_dnf,
)
from .schaefer import HornMode, solve_horn_family

DEFAULT_ATOM_LIMIT = 22
_GUESS_CHUNK = 1 << 12
_PLACEHOLDER = "__neg"


class AtomLimitExceeded(RuntimeError):
    def __init__(self, limit: int, count: int):
        super().__init__(f"{count} atoms exceeds the brute-force limit of {limit}")
        self.limit = limit
        self.count = count


def brute_force_sat(f: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> SatResult:
    """Try all 2**n valuations; the witness is the lexicographically first model.

    Atoms are taken in sorted order and false precedes true, so for ``p | q``
    the first model is ``{q}``.
    """
    atoms = sorted(free_atoms(f))
    n = len(atoms)
    if n > atom_limit:
        raise AtomLimitExceeded(atom_limit, n)
    if any(isinstance(node, Box) for node in subformulas(f)):
        raise NotInFragment("brute force needs a propositional formula")
    ops, args = _kernels.compile_formula(f, {a: i for i, a in enumerate(atoms)})
    code = _kernels.first_model(ops, args, n)
    if code < 0:
        return SatResult.unsat(candidates=1 << n)
    return SatResult.of((a for i, a in enumerate(atoms) if (code >> (n - 1 - i)) & 1), code + 1)


def solve_positive(f: Formula) -> SatResult:
    """Negation-free formulas are satisfied by making every atom true."""
    if not has_fragment(f, Fragment.POSITIVE):
        raise NotInFragment("solve_positive needs a formula with only atoms, & and |")
    return checked(f, SatResult.of(free_atoms(f), candidates=1))


def negative_term_sweep(
    positive_part: Formula, negative_dnf: DnfFormula, universe: Iterable[str]
) -> SatResult:
    """Decide ``positive_part & (t1 | t2 | ...)`` where each term is a set of negative literals.

    For each term in order, the candidate is the universe minus the term's
    atoms: the largest valuation making that term true. The positive part is
    monotone, so if any model exists, the candidate of a term it satisfies is
    also a model.
    """
    universe = frozenset(universe)
    if not is_monotone(positive_part):
        raise NotInFragment("positive_part must contain no ~ and no ->")
    if any(l.positive for t in negative_dnf.terms for l in t):
        raise NotInFragment("negative_dnf must contain only negated atoms")
    missing = (free_atoms(positive_part) | negative_dnf.atoms()) - universe
    if missing:
        raise NotInFragment(f"universe is missing atoms {sorted(missing)}")
    for i, term in enumerate(negative_dnf.terms):
        candidate = universe - {l.atom for l in term}
        if evaluate(positive_part, candidate):
            return SatResult.of(candidate, candidates=i + 1)
    return SatResult.unsat(candidates=len(negative_dnf.terms))


class OneNegationCase(enum.IntEnum):
    BEFORE_VARIABLE = 1
    BEFORE_VARIABLE_GROUP = 2
    BEFORE_CONJUNCTION = 3
    BEFORE_CONJUNCTION_GROUP = 4


def _require_negations(f: Formula, k: int) -> None:
    n = count_negations(f)
    if n != k:
        raise NotInFragment(f"formula has {n} negations, solver needs exactly {k}")
    for node in subformulas(f):
        if isinstance(node, Implies):
            raise NotInFragment("'->' hides a negation; rewrite it with ~ and |")
        if isinstance(node, Box):
            raise NotInFragment("propositional formulas only")


def _the_negation(f: Formula) -> Not:
    return next(n for n in subformulas(f) if isinstance(n, Not))


def _is_atom_disjunction(g: Formula) -> bool:
    if isinstance(g, Atom):
        return True
    return isinstance(g, Or) and _is_atom_disjunction(g.left) and _is_atom_disjunction(g.right)


def one_negation_case(
    f: Formula, clause_cap: int = DEFAULT_CAP
) -> tuple[OneNegationCase, CnfFormula]:
    """Where the single ``Not`` sits, judged on the CNF of the formula.

    1: over an atom. 2: over a disjunction of atoms, which De Morgan turns
    into a conjunction of negated atoms. Both always give a CNF whose
    clauses carry at most one negated literal. 3: over anything else whose
    CNF still has that property. 4: everything left, which goes to the
    negative-term sweep.
    """
    _require_negations(f, 1)
    g = _the_negation(f).child
    cnf = to_cnf(f, clause_cap)
    if isinstance(g, Atom):
        return OneNegationCase.BEFORE_VARIABLE, cnf
    if _is_atom_disjunction(g):
        return OneNegationCase.BEFORE_VARIABLE_GROUP, cnf
    if all(sum(1 for l in c if not l.positive) <= 1 for c in cnf.clauses):
        return OneNegationCase.BEFORE_CONJUNCTION, cnf
    return OneNegationCase.BEFORE_CONJUNCTION_GROUP, cnf


def split_blocks(f: Formula) -> tuple[Formula, list[Formula]]:
    """Cut ``f`` at its ``Not`` nodes.

    Returns the top block and one block per ``Not`` (its child), numbered in
    preorder. Inside every block each directly nested ``Not`` is replaced by
    the placeholder atom ``__neg<i>``.
    """
    blocks: list = []

    def walk(node: Formula) -> Formula:
        if isinstance(node, Not):
            i = len(blocks)
            blocks.append(None)
            blocks[i] = walk(node.child)
            return Atom(f"{_PLACEHOLDER}{i}")
        if isinstance(node, (And, Or, Implies)):
            return type(node)(walk(node.left), walk(node.right))
        return node

    top = walk(f)
    return top, blocks


def _substitute(f: Formula, values: dict) -> Formula:
    if isinstance(f, Atom):
        if f.name in values:
            return ConstTrue() if values[f.name] else ConstFalse()
        return f
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_substitute(f.left, values), _substitute(f.right, values))
    if isinstance(f, Not):
        return Not(_substitute(f.child, values))
    return f


def _block_atoms(block: Formula) -> frozenset:
    return frozenset(a for a in free_atoms(block) if not a.startswith(_PLACEHOLDER))


def _guess_bits(start: int, stop: int, k: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)[:, None]
    shifts = (k - 1 - np.arange(k, dtype=np.int64))[None, :]
    return ((codes >> shifts) & 1).astype(bool)


def _extremal_sweep(f: Formula, least: bool) -> SatResult:
    """Guess sweep for formulas whose blocks are plain conjunctions (``least``)
    or plain disjunctions (not ``least``); at most 2**k candidates.

    For conjunctive blocks the candidate is the union of the atoms of every
    block required true; for disjunctive blocks it is the universe minus the
    atoms of every block required false. Candidates for a whole chunk of
    guesses are built with one boolean matrix product and checked in one
    batched kernel call.
    """
    top, blocks = split_blocks(f)
    k = len(blocks)
    atoms = sorted(free_atoms(f))
    index = {a: i for i, a in enumerate(atoms)}
    masks = np.zeros((k + 1, len(atoms)), dtype=bool)
    for row, block in enumerate([top, *blocks]):
        for a in _block_atoms(block):
            masks[row, index[a]] = True
    ops, args = _kernels.compile_formula(f, index)

    total = 1 << k
    for lo in range(0, total, _GUESS_CHUNK):
        hi = min(lo + _GUESS_CHUNK, total)
        g = _guess_bits(lo, hi, k)
        if least:
            required = np.hstack([np.ones((hi - lo, 1), dtype=bool), g])
            rows = _kernels.bool_matmul(required, masks)
        else:
            refuted = np.hstack([np.zeros((hi - lo, 1), dtype=bool), ~g])
            rows = ~_kernels.bool_matmul(refuted, masks)
        hits = _kernels.eval_rows(ops, args, rows)
        if hits.any():
            j = int(np.argmax(hits))
            witness = [atoms[i] for i in np.flatnonzero(rows[j])]
            return SatResult.of(witness, candidates=lo + j + 1)
    return SatResult.unsat(candidates=total)


def _clause_sweep(f: Formula, clause_cap: int) -> SatResult:
    """Guess sweep for arbitrary negation-free blocks.

    For each guess, every block required false must falsify one clause of
    its CNF; the candidate is the universe minus the atoms of one chosen
    clause per such block, over all combinations.
    """
    top, blocks = split_blocks(f)
    k = len(blocks)
    universe = free_atoms(f)
    tried = 0
    for code in range(1 << k):
        g = [bool((code >> (k - 1 - i)) & 1) for i in range(k)]
        values = {f"{_PLACEHOLDER}{i}": not g[i] for i in range(k)}
        choices = []
        for i in range(k):
            if g[i]:
                continue
            block = simplify_constants(_substitute(blocks[i], values))
            clauses = to_cnf(block, clause_cap).clauses
            if not clauses:  # block is valid, cannot be made false
                break
            choices.append(clauses)
        else:
            for combo in itertools.product(*choices):
                tried += 1
                candidate = universe - {l.atom for c in combo for l in c}
                if evaluate(f, candidate):
                    return SatResult.of(candidate, candidates=tried)
    return SatResult.unsat(candidates=tried)


def solve_one_negation(
    f: Formula, clause_cap: int = DEFAULT_CAP, term_cap: int | None = None
) -> SatResult:
    """Exactly one ``Not``. Cases 1-3 are dual-Horn; case 4 uses the negative-term sweep."""
    case, cnf = one_negation_case(f, clause_cap)
    universe = free_atoms(f)
    if case is not OneNegationCase.BEFORE_CONJUNCTION_GROUP:
        return checked(f, solve_horn_family(cnf, HornMode.DUAL_HORN, universe))

    negated = _the_negation(f)
    top, _ = split_blocks(f)
    positive_part = simplify_constants(_substitute(top, {f"{_PLACEHOLDER}0": True}))
    result = negative_term_sweep(positive_part, to_dnf(negated, term_cap or clause_cap), universe)
    if result.sat:
        return checked(f, result)
    # remaining possibility: the negated block is true, so only the all-true valuation can work
    tried = (result.candidates or 0) + 1
    if evaluate(f, universe):
        return checked(f, SatResult.of(universe, candidates=tried))
    return SatResult.unsat(candidates=tried)


def _collapse_double_negation(f: Formula) -> Formula:
    if isinstance(f, Not):
        if isinstance(f.child, Not):
            return _collapse_double_negation(f.child.child)
        return Not(_collapse_double_negation(f.child))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_collapse_double_negation(f.left), _collapse_double_negation(f.right))
    return f


def solve_two_negations(
    f: Formula, clause_cap: int = DEFAULT_CAP, term_cap: int | None = None
) -> SatResult:
    """Exactly two ``Not`` nodes.

    Directly stacked ``~~`` collapses and defers to the smaller cases;
    otherwise the clause sweep tries, for each guess, every pairing of one
    clause from each block required false.
    """
    _require_negations(f, 2)
    g = _collapse_double_negation(f)
    k = count_negations(g)
    if k == 1:
        return checked(f, solve_one_negation(g, clause_cap, term_cap))
    if k == 0:
        universe = free_atoms(g)
        return checked(f, SatResult.of(universe, 1) if evaluate(g, universe) else SatResult.unsat(1))
    return checked(f, _clause_sweep(f, clause_cap))


def solve_and_only(f: Formula) -> SatResult:
    """``&``/``~`` formulas with k negations: at most 2**k candidate valuations."""
    fc = next((c for c in classify_fragment(f) if c.kind is Fragment.AND_ONLY), None)
    if fc is None:
        raise NotInFragment("solve_and_only needs a formula built from atoms, & and ~")
    result = _extremal_sweep(f, least=True)
    assert result.candidates <= 1 << fc.k, "candidate bound violated"
    return checked(f, result)


def solve_or_only(f: Formula) -> SatResult:
    """``|``/``~`` formulas with k negations: at most 2**k candidate valuations."""
    fc = next((c for c in classify_fragment(f) if c.kind is Fragment.OR_ONLY), None)
    if fc is None:
        raise NotInFragment("solve_or_only needs a formula built from atoms, | and ~")
    if has_fragment(f, Fragment.POSITIVE):
        return solve_positive(f)
    result = _extremal_sweep(f, least=False)
    assert result.candidates <= 1 << fc.k, "candidate bound violated"
    return checked(f, result)
