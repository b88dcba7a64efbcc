"""Concrete syntax for formulas and programs, plus the JSON frame format.

Formula grammar, loosest binding first::

    formula  := or ('->' formula)?            right associative
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | '[' program ']' unary | '0' | IDENT | '(' formula ')'
    program  := seq ('+' seq)*
    seq      := iter (';' iter)*
    iter     := pprimary '*'*
    pprimary := IDENT | '0?' | IDENT '?' | '(' formula ')' '?' | '(' program ')'

``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

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

RESERVED_PREFIX = "__"  # internal names: __sigma, __neg<i>

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)
  | (?P<zero>0(?![0-9a-zA-Z_]))
  | (?P<sym>[~&|()\[\];+*?])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at bytes {span.start}..{span.end}")
        self.span = span


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', '0', a symbol, '->', or 'eof'
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    ascii_only = text.isascii()

    def boff(i: int) -> int:
        return i if ascii_only else len(text[:i].encode("utf-8"))

    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(boff(pos), boff(pos + 1)))
        kind = m.lastgroup
        if kind != "ws":
            lexeme = m.group()
            tk = {"ident": "ident", "zero": "0", "arrow": "->"}.get(kind, lexeme)
            toks.append(_Tok(tk, lexeme, boff(m.start()), boff(m.end())))
        pos = m.end()
    end = boff(len(text))
    toks.append(_Tok("eof", "", end, end))
    return toks


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self._test_memo: dict[int, tuple] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"expected {expected}, found {found}", SourceSpan(t.start, t.end))

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise self.error(what or repr(kind))
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise self.error("identifier")
        if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise ParseError(f"{t.text!r} is a reserved name", SourceSpan(t.start, t.end))
        self.i += 1
        return t.text

    # formulas

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.accept("|"):
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.accept("&"):
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("["):
            prog = self.program()
            self.expect("]", "']'")
            return Box(prog, self.unary())
        if self.accept("0"):
            return ConstFalse()
        if t.kind == "ident":
            return Atom(self.ident())
        if self.accept("("):
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        raise self.error("formula")

    # programs

    def program(self) -> Program:
        out = self.sequence()
        while self.accept("+"):
            out = Choice(out, self.sequence())
        return out

    def sequence(self) -> Program:
        out = self.iteration()
        while self.accept(";"):
            out = Seq(out, self.iteration())
        return out

    def iteration(self) -> Program:
        out = self.pprimary()
        while self.accept("*"):
            out = Star(out)
        return out

    def pprimary(self) -> Program:
        t = self.tok
        if t.kind == "0":
            self.i += 1
            self.expect("?", "'?' after 0 in program position")
            return Test(ConstFalse())
        if t.kind == "ident":
            nxt = self.toks[self.i + 1]
            if nxt.kind == "?":
                name = self.ident()
                self.i += 1
                return Test(Atom(name))
            return AtomProg(self.ident())
        if t.kind == "(":
            test = self.try_test()
            if test is not None:
                return test
            self.i += 1
            inner = self.program()
            self.expect(")", "')'")
            return inner
        raise self.error("program")

    def try_test(self) -> Test | None:
        """Parse ``( formula ) ?`` at the cursor if possible, else leave the cursor alone."""
        start = self.i
        if start in self._test_memo:
            result, end = self._test_memo[start]
            if result is not None:
                self.i = end
            return result
        result = None
        try:
            self.i += 1
            cond = self.formula()
            if self.accept(")") and self.accept("?"):
                result = Test(cond)
        except ParseError:
            pass
        end = self.i
        self._test_memo[start] = (result, end)
        if result is None:
            self.i = start
        return result


def parse_formula(text: str, *, allow_reserved: bool = False) -> Formula:
    """Parse a formula; raises ``ParseError`` carrying a byte span."""
    p = _Parser(text, allow_reserved)
    if p.tok.kind == "eof":
        raise p.error("formula")
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("end of input")
    return f


def parse_program(text: str) -> Program:
    p = _Parser(text, False)
    prog = p.program()
    if p.tok.kind != "eof":
        raise p.error("end of input")
    return prog


# printing: binding strength of each node, loosest = 1

_F_IMP, _F_OR, _F_AND, _F_UNARY, _F_ATOM = 1, 2, 3, 4, 5
_P_CHOICE, _P_SEQ, _P_ITER, _P_ATOM = 1, 2, 3, 4


def print_formula(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    return _pf(f, _F_IMP)


def _wrap(s: str, level: int, needed: int) -> str:
    return f"({s})" if level < needed else s


def _pf(f: Formula, needed: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, ConstFalse):
        return "0"
    if isinstance(f, ConstTrue):
        return _wrap("~0", _F_UNARY, needed)
    if isinstance(f, Not):
        return _wrap("~" + _pf(f.child, _F_UNARY), _F_UNARY, needed)
    if isinstance(f, Box):
        return _wrap(f"[{_pp(f.program, _P_CHOICE)}]" + _pf(f.child, _F_UNARY), _F_UNARY, needed)
    if isinstance(f, And):
        return _wrap(f"{_pf(f.left, _F_AND)} & {_pf(f.right, _F_UNARY)}", _F_AND, needed)
    if isinstance(f, Or):
        return _wrap(f"{_pf(f.left, _F_OR)} | {_pf(f.right, _F_AND)}", _F_OR, needed)
    if isinstance(f, Implies):
        return _wrap(f"{_pf(f.left, _F_OR)} -> {_pf(f.right, _F_IMP)}", _F_IMP, needed)
    raise TypeError(f"not a formula: {f!r}")


def print_program(p: Program) -> str:
    return _pp(p, _P_CHOICE)


def _pp(p: Program, needed: int) -> str:
    if isinstance(p, AtomProg):
        return p.name
    if isinstance(p, Test):
        c = p.condition
        body = _pf(c, _F_ATOM) if isinstance(c, (Atom, ConstFalse)) else f"({_pf(c, _F_IMP)})"
        return body + "?"
    if isinstance(p, Star):
        return _wrap(_pp(p.child, _P_ITER) + "*", _P_ITER, needed)
    if isinstance(p, Seq):
        return _wrap(f"{_pp(p.left, _P_SEQ)}; {_pp(p.right, _P_ITER)}", _P_SEQ, needed)
    if isinstance(p, Choice):
        return _wrap(f"{_pp(p.left, _P_CHOICE)} + {_pp(p.right, _P_SEQ)}", _P_CHOICE, needed)
    raise TypeError(f"not a program: {p!r}")


# frames

class FrameError(ValueError):
    pass


def parse_frame(text: str):
    """Read the JSON frame format into a validated ``KripkeFrame``."""
    from .kripke import KripkeFrame

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FrameError("frame must be a JSON object")
    keys = set(data)
    if keys != {"states", "props", "progs"}:
        extra = sorted(keys - {"states", "props", "progs"})
        missing = sorted({"states", "props", "progs"} - keys)
        raise FrameError(f"frame keys wrong (unknown: {extra}, missing: {missing})")

    states = data["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise FrameError('"states" must be an array of strings')
    if len(set(states)) != len(states):
        dup = next(s for i, s in enumerate(states) if s in states[:i])
        raise FrameError(f"duplicate state {dup!r}")
    known = set(states)

    def state(name, where: str) -> str:
        if not isinstance(name, str):
            raise FrameError(f"state names must be strings in {where}")
        if name not in known:
            raise FrameError(f"unknown state {name!r} in {where}")
        return name

    props_raw, progs_raw = data["props"], data["progs"]
    if not isinstance(props_raw, dict) or not isinstance(progs_raw, dict):
        raise FrameError('"props" and "progs" must be objects')
    props = {}
    for name, members in props_raw.items():
        if not isinstance(members, list):
            raise FrameError(f'prop {name!r} must map to an array')
        props[name] = frozenset(state(s, f"prop {name!r}") for s in members)
    progs = {}
    for name, pairs in progs_raw.items():
        if not isinstance(pairs, list):
            raise FrameError(f'program {name!r} must map to an array')
        rel = set()
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise FrameError(f"program {name!r} entries must be 2-element arrays")
            rel.add((state(pair[0], f"program {name!r}"), state(pair[1], f"program {name!r}")))
        progs[name] = frozenset(rel)
    return KripkeFrame(tuple(states), props, progs)


def print_frame(frame) -> str:
    order = {s: i for i, s in enumerate(frame.states)}
    data = {
        "states": list(frame.states),
        "props": {
            name: sorted(members, key=order.__getitem__)
            for name, members in sorted(frame.props.items())
        },
        "progs": {
            name: [list(p) for p in sorted(rel, key=lambda p: (order[p[0]], order[p[1]]))]
            for name, rel in sorted(frame.progs.items())
        },
    }
    return json.dumps(data, indent=2)


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())
