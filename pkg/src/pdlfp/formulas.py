"""Syntax trees for propositional and dynamic-logic formulas.

Formulas and programs are immutable dataclasses, so structural equality and
hashing come for free. A propositional formula is simply a formula tree that
contains no ``Box`` node; the same classes serve both languages.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

IDENT_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")

Valuation = frozenset  # frozenset[str]: the atoms taken as true


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not IDENT_RE.match(name):
        raise ValueError(f"invalid identifier: {name!r}")


@dataclass(frozen=True, slots=True)
class ConstFalse:
    pass


@dataclass(frozen=True, slots=True)
class ConstTrue:
    """Internal constant produced only by negation-normalizing ``~0``."""


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name)


@dataclass(frozen=True, slots=True)
class Not:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    program: "Program"
    child: "Formula"


@dataclass(frozen=True, slots=True)
class AtomProg:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name)


@dataclass(frozen=True, slots=True)
class Seq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True, slots=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True, slots=True)
class Star:
    child: "Program"


@dataclass(frozen=True, slots=True)
class Test:
    condition: "Formula"


Formula = Union[ConstFalse, ConstTrue, Atom, Not, And, Or, Implies, Box]
Program = Union[AtomProg, Seq, Choice, Star, Test]
BINARY = (And, Or, Implies)


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Preorder walk over formula nodes, descending into test programs."""
    stack: list = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, (AtomProg,)):
            continue
        if isinstance(node, (Seq, Choice)):
            stack.append(node.right)
            stack.append(node.left)
            continue
        if isinstance(node, Star):
            stack.append(node.child)
            continue
        if isinstance(node, Test):
            stack.append(node.condition)
            continue
        yield node
        if isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, Box):
            stack.append(node.child)
            stack.append(node.program)


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(n, Box) for n in subformulas(f))


def count_negations(f: Formula) -> int:
    """Number of ``Not`` nodes, counted as written (``~~p`` has two)."""
    return sum(1 for n in subformulas(f) if isinstance(n, Not))


def free_atoms(f: Formula) -> frozenset:
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Atom))


def evaluate(f: Formula, t: Iterable[str]) -> bool:
    """Classical truth value of a propositional formula; absent atoms are false."""
    if not isinstance(t, (set, frozenset)):
        t = frozenset(t)
    return _eval(f, t)


def _eval(f: Formula, t) -> bool:
    if isinstance(f, Atom):
        return f.name in t
    if isinstance(f, And):
        return _eval(f.left, t) and _eval(f.right, t)
    if isinstance(f, Or):
        return _eval(f.left, t) or _eval(f.right, t)
    if isinstance(f, Not):
        return not _eval(f.child, t)
    if isinstance(f, Implies):
        return (not _eval(f.left, t)) or _eval(f.right, t)
    if isinstance(f, ConstFalse):
        return False
    if isinstance(f, ConstTrue):
        return True
    raise TypeError(f"evaluate() needs a propositional formula, got {type(f).__name__}")


class Fragment(enum.Enum):
    POSITIVE = "Positive"
    AND_ONLY = "AndOnly"
    OR_ONLY = "OrOnly"
    GENERAL = "General"


@dataclass(frozen=True)
class FragmentClass:
    kind: Fragment
    k: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("negation count must be nonnegative")
        if self.kind is Fragment.POSITIVE and self.k:
            raise ValueError("a positive formula has no negations")

    def __lt__(self, other):  # enum members are not orderable
        return (self.kind.value, self.k) < (other.kind.value, other.k)

    def __str__(self) -> str:
        if self.kind is Fragment.POSITIVE:
            return "Positive"
        return f"{self.kind.value}({self.k})"


def is_monotone(f: Formula) -> bool:
    """No ``Not`` and no ``Implies``: truth can only grow with the valuation."""
    return not any(isinstance(n, (Not, Implies, Box)) for n in subformulas(f))


def classify_fragment(f: Formula) -> frozenset:
    """Every fragment class the formula belongs to (``General`` always)."""
    nodes = list(subformulas(f))
    k = sum(1 for n in nodes if isinstance(n, Not))
    kinds = {type(n) for n in nodes if isinstance(n, BINARY + (Box,))}
    out = {FragmentClass(Fragment.GENERAL, k)}
    if k == 0 and not kinds - {And, Or} and not any(
        isinstance(n, (ConstFalse, ConstTrue)) for n in nodes
    ):
        out.add(FragmentClass(Fragment.POSITIVE))
    if kinds <= {And}:
        out.add(FragmentClass(Fragment.AND_ONLY, k))
    if kinds <= {Or}:
        out.add(FragmentClass(Fragment.OR_ONLY, k))
    return frozenset(out)


def has_fragment(f: Formula, kind: Fragment) -> bool:
    return any(c.kind is kind for c in classify_fragment(f))


class NotInFragment(ValueError):
    """A solver was handed a formula outside the fragment it decides."""


@dataclass(frozen=True)
class SatResult:
    """Solver verdict: a witness valuation, or ``None`` when unsatisfiable.

    ``candidates`` records how many candidate valuations a sweeping solver
    examined, where that is meaningful.
    """

    witness: frozenset | None
    candidates: int | None = field(default=None, compare=False)

    @classmethod
    def unsat(cls, candidates: int | None = None) -> "SatResult":
        return cls(None, candidates)

    @classmethod
    def of(cls, atoms: Iterable[str], candidates: int | None = None) -> "SatResult":
        return cls(frozenset(atoms), candidates)

    @property
    def sat(self) -> bool:
        return self.witness is not None

    def __str__(self) -> str:
        if self.witness is None:
            return "UNSAT"
        return " ".join(["SAT", *sorted(self.witness)])


def witness_checks_enabled() -> bool:
    return os.environ.get("PDLFP_CHECK_WITNESS", "") not in ("", "0")


def checked(f: Formula, result: SatResult) -> SatResult:
    """Assert the witness satisfies ``f`` when witness checking is switched on."""
    if result.sat and witness_checks_enabled() and not evaluate(f, result.witness):
        raise AssertionError(f"witness {sorted(result.witness)} does not satisfy formula")
    return result
