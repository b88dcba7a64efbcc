"""Finite Kripke frames: evaluation of formulas and programs, model checking,
and the rewrite that confines negation to atomic formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .formulas import (
    And,
    Atom,
    AtomProg,
    Box,
    Choice,
    ConstFalse,
    ConstTrue,
    Formula,
    Implies,
    Not,
    Or,
    Program,
    Seq,
    Star,
    Test,
)

SIGMA = Atom("__sigma")
FALSUM = And(SIGMA, Not(SIGMA))


@dataclass(frozen=True, eq=True)
class KripkeFrame:
    """States plus the meaning of atomic formulas (state sets) and atomic
    programs (sets of state pairs). Unmapped names denote the empty set."""

    states: tuple
    props: Mapping[str, frozenset] = field(default_factory=dict)
    progs: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        known = set(self.states)
        props = {k: frozenset(v) for k, v in self.props.items()}
        progs = {k: frozenset((a, b) for a, b in v) for k, v in self.progs.items()}
        for name, members in props.items():
            if not members <= known:
                raise ValueError(f"prop {name!r} mentions unknown states {sorted(members - known)}")
        for name, rel in progs.items():
            bad = {s for pair in rel for s in pair} - known
            if bad:
                raise ValueError(f"program {name!r} mentions unknown states {sorted(bad)}")
        object.__setattr__(self, "props", props)
        object.__setattr__(self, "progs", progs)

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def prop_mask(self, name: str) -> np.ndarray:
        out = np.zeros(self.size, dtype=bool)
        for s in self.props.get(name, ()):
            out[self.index[s]] = True
        return out

    def prog_matrix(self, name: str) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=bool)
        for a, b in self.progs.get(name, ()):
            out[self.index[a], self.index[b]] = True
        return out

    def to_states(self, mask: np.ndarray) -> frozenset:
        return frozenset(self.states[i] for i in np.flatnonzero(mask))

    def to_pairs(self, matrix: np.ndarray) -> frozenset:
        rows, cols = np.nonzero(matrix)
        return frozenset((self.states[i], self.states[j]) for i, j in zip(rows, cols))


def formula_mask(frame: KripkeFrame, f: Formula) -> np.ndarray:
    """Boolean vector over ``frame.states`` marking where ``f`` holds."""
    n = frame.size
    if isinstance(f, ConstFalse):
        return np.zeros(n, dtype=bool)
    if isinstance(f, ConstTrue):
        return np.ones(n, dtype=bool)
    if isinstance(f, Atom):
        return frame.prop_mask(f.name)
    if isinstance(f, Not):
        return ~formula_mask(frame, f.child)
    if isinstance(f, And):
        return formula_mask(frame, f.left) & formula_mask(frame, f.right)
    if isinstance(f, Or):
        return formula_mask(frame, f.left) | formula_mask(frame, f.right)
    if isinstance(f, Implies):
        return ~formula_mask(frame, f.left) | formula_mask(frame, f.right)
    if isinstance(f, Box):
        # K - (R o (K - S)): states with no program edge into a failing state
        failing = ~formula_mask(frame, f.child)
        return ~_kernels.preimage(program_matrix(frame, f.program), failing)
    raise TypeError(f"not a formula: {f!r}")


def program_matrix(frame: KripkeFrame, a: Program) -> np.ndarray:
    """Adjacency matrix of the relation a program denotes."""
    if isinstance(a, AtomProg):
        return frame.prog_matrix(a.name)
    if isinstance(a, Seq):
        return _kernels.bool_matmul(program_matrix(frame, a.left), program_matrix(frame, a.right))
    if isinstance(a, Choice):
        return program_matrix(frame, a.left) | program_matrix(frame, a.right)
    if isinstance(a, Star):
        return _kernels.closure(program_matrix(frame, a.child))
    if isinstance(a, Test):
        return np.diag(formula_mask(frame, a.condition))
    raise TypeError(f"not a program: {a!r}")


def eval_formula(frame: KripkeFrame, f: Formula) -> frozenset:
    return frame.to_states(formula_mask(frame, f))


def eval_program(frame: KripkeFrame, a: Program) -> frozenset:
    return frame.to_pairs(program_matrix(frame, a))


def model_check(frame: KripkeFrame, state: str, f: Formula) -> bool:
    if state not in frame.index:
        raise ValueError(f"unknown state {state!r}")
    return bool(formula_mask(frame, f)[frame.index[state]])


def pdl_nnf(f: Formula) -> Formula:
    """Rewrite so that ``Not`` only ever sits directly above an ``Atom``.

    A negated compound ``~psi`` becomes ``[psi?](__sigma & ~__sigma)``: the
    box over a test of ``psi`` with an unsatisfiable body holds exactly where
    ``psi`` fails. Rewriting is bottom-up, so ``psi`` is already normalized.
    """
    if isinstance(f, (Atom, ConstFalse, ConstTrue)):
        return f
    if isinstance(f, Not):
        if isinstance(f.child, Atom):
            return f
        return Box(Test(pdl_nnf(f.child)), FALSUM)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(pdl_nnf(f.left), pdl_nnf(f.right))
    if isinstance(f, Box):
        return Box(_program_nnf(f.program), pdl_nnf(f.child))
    raise TypeError(f"not a formula: {f!r}")


def _program_nnf(a: Program) -> Program:
    if isinstance(a, AtomProg):
        return a
    if isinstance(a, Test):
        return Test(pdl_nnf(a.condition))
    if isinstance(a, Star):
        return Star(_program_nnf(a.child))
    return type(a)(_program_nnf(a.left), _program_nnf(a.right))


def random_frame(
    seed: int,
    state_count: int,
    atom_names: Sequence[str] = ("p", "q"),
    prog_names: Sequence[str] = ("a", "b"),
    edge_density: float = 0.3,
) -> KripkeFrame:
    """Frame on states ``s0..s{n-1}``; every membership and edge is an independent coin flip."""
    if not 0.0 <= edge_density <= 1.0:
        raise ValueError("edge_density must lie in [0, 1]")
    if state_count < 1:
        raise ValueError("state_count must be positive")
    rng = np.random.default_rng(seed)
    states = tuple(f"s{i}" for i in range(state_count))
    props = {}
    for name in atom_names:
        mask = rng.random(state_count) < edge_density
        if mask.any():
            props[name] = frozenset(states[i] for i in np.flatnonzero(mask))
    progs = {}
    for name in prog_names:
        rel = rng.random((state_count, state_count)) < edge_density
        if rel.any():
            rows, cols = np.nonzero(rel)
            progs[name] = frozenset((states[i], states[j]) for i, j in zip(rows, cols))
    return KripkeFrame(states, props, progs)


def valuation_frame(valuation: Iterable[str], atoms: Iterable[str]) -> KripkeFrame:
    """Single-state frame whose atom meanings encode a propositional valuation."""
    true = set(valuation)
    return KripkeFrame(("s0",), {a: {"s0"} if a in true else set() for a in atoms}, {})
