"""Schaefer's tractable classes: detection plus one polynomial solver per class."""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .formulas import Formula, SatResult, evaluate, free_atoms
from .normal_forms import CnfFormula, Literal


class SchaeferClass(enum.Enum):
    ALL_FALSE_SAT = "AllFalseSat"
    ALL_TRUE_SAT = "AllTrueSat"
    DUAL_HORN = "DualHorn"
    HORN = "Horn"
    TWO_CNF = "TwoCnf"
    AFFINE = "Affine"

    def __str__(self) -> str:
        return self.value


class ClauseClassError(ValueError):
    """A clause lies outside the class a solver requires."""

    def __init__(self, index: int, clause, requirement: str):
        lits = ", ".join(str(l) for l in sorted(clause))
        super().__init__(f"clause {index} {{{lits}}} violates: {requirement}")
        self.index = index


def _negatives(clause) -> int:
    return sum(1 for l in clause if not l.positive)


def _positives(clause) -> int:
    return sum(1 for l in clause if l.positive)


def classify_schaefer(f: Formula, cnf: CnfFormula | None = None) -> frozenset:
    """Schaefer conditions met by ``f``.

    The all-false and all-true conditions are decided by evaluating ``f``.
    The Horn, dual-Horn and 2-CNF conditions are syntactic checks on ``cnf``
    and are skipped without one. A CNF containing the empty clause meets none
    of them. Affine is never inferred from a formula.
    """
    atoms = free_atoms(f)
    out = set()
    if evaluate(f, ()):
        out.add(SchaeferClass.ALL_FALSE_SAT)
    if evaluate(f, atoms):
        out.add(SchaeferClass.ALL_TRUE_SAT)
    if cnf is not None and all(cnf.clauses):
        if all(_negatives(c) <= 1 for c in cnf.clauses):
            out.add(SchaeferClass.DUAL_HORN)
        if all(_positives(c) <= 1 for c in cnf.clauses):
            out.add(SchaeferClass.HORN)
        if all(len(c) <= 2 for c in cnf.clauses):
            out.add(SchaeferClass.TWO_CNF)
    return frozenset(out)


class HornMode(enum.Enum):
    HORN = "horn"
    DUAL_HORN = "dual-horn"


def solve_horn_family(
    cnf: CnfFormula, mode: HornMode = HornMode.HORN, universe: Iterable[str] | None = None
) -> SatResult:
    """Unit propagation to a fixpoint, linear in the number of literals.

    Horn mode starts from all-false and returns the least model; dual-Horn
    mode flips every polarity, runs the same propagation, and complements
    against ``universe`` (default: the CNF's atoms) to give the greatest model.
    """
    dual = mode is HornMode.DUAL_HORN
    universe = frozenset(universe) if universe is not None else cnf.atoms()
    universe |= cnf.atoms()
    for i, c in enumerate(cnf.clauses):
        if (_negatives(c) if dual else _positives(c)) > 1:
            req = "at most one negated literal" if dual else "at most one unnegated literal"
            raise ClauseClassError(i, c, req)

    # body: atoms that must become true (false, in dual mode) to fire the clause
    heads: list = []
    missing: list[int] = []
    watchers: dict = defaultdict(list)
    queue: list = []
    for i, c in enumerate(cnf.clauses):
        head = None
        body = []
        for l in c:
            if l.positive != dual:
                head = l.atom
            else:
                body.append(l.atom)
        heads.append(head)
        missing.append(len(body))
        for a in body:
            watchers[a].append(i)
        if not body:
            if head is None:
                return SatResult.unsat()
            queue.append(head)

    forced: set = set()
    while queue:
        a = queue.pop()
        if a in forced:
            continue
        forced.add(a)
        for i in watchers.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                if heads[i] is None:
                    return SatResult.unsat()
                if heads[i] not in forced:
                    queue.append(heads[i])
    return SatResult.of(universe - forced if dual else forced)


def solve_2sat(cnf: CnfFormula, universe: Iterable[str] | None = None) -> SatResult:
    """Implication graph plus Tarjan SCC; linear time.

    Tarjan emits components sinks-first, so an atom is set true exactly when
    its positive literal's component is emitted before its negation's.
    Atoms not constrained by any clause stay false.
    """
    for i, c in enumerate(cnf.clauses):
        if len(c) > 2:
            raise ClauseClassError(i, c, "at most two literals")
    if any(not c for c in cnf.clauses):
        return SatResult.unsat()
    atoms = sorted(cnf.atoms())
    node = {}
    for a in atoms:
        node[Literal(a, True)] = len(node)
        node[Literal(a, False)] = len(node)
    graph: list[list[int]] = [[] for _ in node]
    for c in cnf.clauses:
        lits = sorted(c)
        x, y = (lits[0], lits[0]) if len(lits) == 1 else lits
        graph[node[~x]].append(node[y])
        graph[node[~y]].append(node[x])

    comp = _tarjan(graph)
    true = set()
    for a in atoms:
        p, n = comp[node[Literal(a, True)]], comp[node[Literal(a, False)]]
        if p == n:
            return SatResult.unsat()
        if p < n:
            true.add(a)
    return SatResult.of(true)


def _tarjan(graph: list[list[int]]) -> list[int]:
    """Component id per vertex, numbered in Tarjan emission order (iterative)."""
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            edges = graph[v]
            while pos < len(edges):
                w = edges[pos]
                pos += 1
                if index[w] == -1:
                    work.append((v, pos))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


@dataclass(frozen=True)
class XorSystem:
    """Linear equations over GF(2): each is (set of atoms, parity)."""

    equations: tuple
    universe: frozenset

    def __init__(self, equations: Iterable, universe: Iterable[str] | None = None):
        eqs = tuple((frozenset(lhs), int(rhs) & 1) for lhs, rhs in equations)
        mentioned = frozenset(a for lhs, _ in eqs for a in lhs)
        uni = frozenset(universe) if universe is not None else mentioned
        if not mentioned <= uni:
            raise ValueError(f"equation atoms outside universe: {sorted(mentioned - uni)}")
        object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "universe", uni)

    def satisfied_by(self, t) -> bool:
        return all(sum(a in t for a in lhs) % 2 == rhs for lhs, rhs in self.equations)


def solve_xor(system: XorSystem) -> SatResult:
    """Gauss-Jordan elimination over GF(2) with rows as int bitsets.

    Bit 0 of a row holds the right-hand side; atom ``i`` (sorted order) is
    bit ``i + 1``. Free variables default to false.
    """
    names = sorted(system.universe)
    bit = {a: 1 << (i + 1) for i, a in enumerate(names)}
    rows = []
    for lhs, rhs in system.equations:
        r = rhs
        for a in lhs:
            r ^= bit[a]
        rows.append(r)

    pivots: list[tuple[int, int]] = []  # (column bit, row)
    for i in range(len(names)):
        col = 1 << (i + 1)
        k = next((j for j, r in enumerate(rows) if r & col), None)
        if k is None:
            continue
        prow = rows.pop(k)
        rows = [r ^ prow if r & col else r for r in rows]
        pivots = [(c, r ^ prow if r & col else r) for c, r in pivots]
        pivots.append((col, prow))
    if any(r == 1 for r in rows):
        return SatResult.unsat()
    true = {names[c.bit_length() - 2] for c, r in pivots if r & 1}
    return SatResult.of(true)


_EQ_RE = re.compile(r"^\s*(?P<lhs>.*?)\s*=\s*(?P<rhs>[01])\s*$")
_NAME_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")


def parse_xor(text: str) -> XorSystem:
    """One equation per line, ``x1 + x2 = 1``; ``#`` comments; ``0`` for an empty sum."""
    eqs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EQ_RE.match(line)
        if m is None:
            raise ValueError(f"line {lineno}: expected 'x + y + ... = 0|1'")
        lhs: set = set()
        for term in m.group("lhs").split("+"):
            term = term.strip()
            if term == "0":
                continue
            if not _NAME_RE.match(term):
                raise ValueError(f"line {lineno}: bad variable {term!r}")
            lhs ^= {term}
        eqs.append((lhs, int(m.group("rhs"))))
    return XorSystem(eqs)
