"""Negation normal form and equivalence-preserving CNF/DNF by distribution.

No auxiliary variables are introduced, so the clause count can grow
exponentially; every conversion takes a cap and raises ``CapExceeded``
instead of running away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formulas import (
    And,
    Atom,
    Box,
    ConstFalse,
    ConstTrue,
    Formula,
    Implies,
    Not,
    Or,
    conj,
    disj,
)

DEFAULT_CAP = 100_000


class CapExceeded(RuntimeError):
    def __init__(self, cap: int, reached: int):
        super().__init__(f"normal form exceeds cap of {cap} (reached {reached})")
        self.cap = cap
        self.reached = reached


@dataclass(frozen=True, order=True)
class Literal:
    atom: str
    positive: bool = True

    def __invert__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def holds(self, t) -> bool:
        return (self.atom in t) == self.positive

    def to_formula(self) -> Formula:
        return Atom(self.atom) if self.positive else Not(Atom(self.atom))

    def __str__(self) -> str:
        return self.atom if self.positive else "~" + self.atom


def pos(name: str) -> Literal:
    return Literal(name, True)


def neg(name: str) -> Literal:
    return Literal(name, False)


def _fmt_set(lits: frozenset) -> str:
    return "{" + ", ".join(str(l) for l in sorted(lits)) + "}"


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses; ``()`` is valid and a ``frozenset()`` clause is false."""

    clauses: tuple

    def __init__(self, clauses: Iterable[Iterable[Literal]]):
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in clauses))

    def atoms(self) -> frozenset:
        return frozenset(l.atom for c in self.clauses for l in c)

    def evaluate(self, t) -> bool:
        return all(any(l.holds(t) for l in c) for c in self.clauses)

    def to_formula(self) -> Formula:
        if not self.clauses:
            return ConstTrue()
        parts = [
            disj(*(l.to_formula() for l in sorted(c))) if c else ConstFalse()
            for c in self.clauses
        ]
        return conj(*parts)

    def __len__(self) -> int:
        return len(self.clauses)

    def __str__(self) -> str:
        return "{" + ", ".join(_fmt_set(c) for c in self.clauses) + "}"


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of terms; ``()`` is unsatisfiable and a ``frozenset()`` term is true."""

    terms: tuple

    def __init__(self, terms: Iterable[Iterable[Literal]]):
        object.__setattr__(self, "terms", tuple(frozenset(t) for t in terms))

    def atoms(self) -> frozenset:
        return frozenset(l.atom for t in self.terms for l in t)

    def evaluate(self, t) -> bool:
        return any(all(l.holds(t) for l in term) for term in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return "{" + ", ".join(_fmt_set(t) for t in self.terms) + "}"


def to_nnf(f: Formula) -> Formula:
    """Push negations onto atoms with De Morgan; ``Implies`` becomes ``Or``."""
    return _nnf(f, True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.child, not positive)
    if isinstance(f, ConstFalse):
        return f if positive else ConstTrue()
    if isinstance(f, ConstTrue):
        return f if positive else ConstFalse()
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), positive)
    if isinstance(f, (And, Or)):
        same = type(f) if positive else (Or if isinstance(f, And) else And)
        return same(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Box):
        raise TypeError("to_nnf handles propositional formulas; use kripke.pdl_nnf for Box")
    raise TypeError(f"not a formula: {f!r}")


def simplify_constants(f: Formula) -> Formula:
    """Fold ``0`` and the internal true constant away; result is constant-free or a constant."""
    if isinstance(f, (Atom, ConstFalse, ConstTrue)):
        return f
    if isinstance(f, Not):
        c = simplify_constants(f.child)
        if isinstance(c, ConstFalse):
            return ConstTrue()
        if isinstance(c, ConstTrue):
            return ConstFalse()
        return c if c is f.child else Not(c)
    if isinstance(f, (And, Or, Implies)):
        a = simplify_constants(f.left)
        b = simplify_constants(f.right)
        if isinstance(f, Implies):
            if isinstance(a, ConstFalse) or isinstance(b, ConstTrue):
                return ConstTrue()
            if isinstance(a, ConstTrue):
                return b
            if isinstance(b, ConstFalse):
                return Not(a)
            return Implies(a, b)
        absorbing, neutral = (ConstFalse, ConstTrue) if isinstance(f, And) else (ConstTrue, ConstFalse)
        if isinstance(a, absorbing) or isinstance(b, absorbing):
            return absorbing()
        if isinstance(a, neutral):
            return b
        if isinstance(b, neutral):
            return a
        if a is f.left and b is f.right:
            return f
        return type(f)(a, b)
    raise TypeError(f"not a propositional formula: {f!r}")


def _flatten(f: Formula, kind) -> list:
    out, stack = [], [f]
    while stack:
        node = stack.pop()
        if isinstance(node, kind):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _is_tautology(clause: frozenset) -> bool:
    return any(~l in clause for l in clause)


def _reduce(clauses: list) -> list:
    """Drop duplicates and absorbed (superset) clauses, keeping first-seen order."""
    seen: dict = {}
    for c in clauses:
        seen.setdefault(c, None)
    unique = list(seen)
    kept: list = []
    for c in sorted(unique, key=len):
        if not any(k <= c for k in kept):
            kept.append(c)
    keep = set(kept)
    return [c for c in unique if c in keep]


def _clauses(f: Formula, cap: int) -> list:
    if isinstance(f, Atom):
        return [frozenset([pos(f.name)])]
    if isinstance(f, Not):
        return [frozenset([neg(f.child.name)])]
    if isinstance(f, ConstTrue):
        return []
    if isinstance(f, ConstFalse):
        return [frozenset()]
    if isinstance(f, And):
        out: list = []
        for part in _flatten(f, And):
            out.extend(_clauses(part, cap))
            if len(out) > cap:
                raise CapExceeded(cap, len(out))
        return _reduce(out)
    if isinstance(f, Or):
        acc = [frozenset()]
        for part in _flatten(f, Or):
            rhs = _clauses(part, cap)
            nxt = []
            for a in acc:
                for b in rhs:
                    u = a | b
                    if _is_tautology(u):
                        continue
                    nxt.append(u)
                    if len(nxt) > cap:
                        raise CapExceeded(cap, len(nxt))
            acc = _reduce(nxt)
            if not acc:
                return acc
        return acc
    raise TypeError(f"unexpected node in NNF: {f!r}")


def to_cnf(f: Formula, clause_cap: int = DEFAULT_CAP) -> CnfFormula:
    """Equivalent CNF with tautologies removed and absorption applied."""
    if clause_cap < 1:
        raise ValueError("clause cap must be positive")
    return CnfFormula(_clauses(to_nnf(f), clause_cap))


def to_dnf(f: Formula, term_cap: int = DEFAULT_CAP) -> DnfFormula:
    """Equivalent DNF, computed as the literal-wise dual of the CNF of ``~f``."""
    if term_cap < 1:
        raise ValueError("term cap must be positive")
    clauses = _clauses(to_nnf(Not(f)), term_cap)
    return DnfFormula(frozenset(~l for l in c) for c in clauses)
