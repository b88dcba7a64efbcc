"""Hot inner loops: batched formula evaluation, brute-force enumeration,
and boolean relation algebra.

Each kernel has a numba ``@njit`` version and a pure-numpy version with the
same signature. The numba path is used when numba imports and
``PDLFP_DISABLE_NUMBA`` is unset; ``IMPLEMENTATIONS`` exposes both so the
benchmark and the tests can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

from .formulas import And, Atom, ConstFalse, ConstTrue, Implies, Not, Or

OP_ATOM, OP_FALSE, OP_TRUE, OP_NOT, OP_AND, OP_OR, OP_IMPLIES = range(7)
_CHUNK = 1 << 15

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


def compile_formula(f, index: dict) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a propositional formula into postfix opcodes.

    ``index`` maps atom names to column positions. Returns ``(ops, args)``;
    ``args[i]`` is the column for ``OP_ATOM`` entries and 0 elsewhere.
    """
    ops: list[int] = []
    args: list[int] = []
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Atom):
            ops.append(OP_ATOM)
            args.append(index[node.name])
        elif isinstance(node, ConstFalse):
            ops.append(OP_FALSE)
            args.append(0)
        elif isinstance(node, ConstTrue):
            ops.append(OP_TRUE)
            args.append(0)
        elif expanded:
            ops.append(_BINOP.get(type(node), OP_NOT))
            args.append(0)
        elif isinstance(node, Not):
            stack.append((node, True))
            stack.append((node.child, False))
        elif isinstance(node, (And, Or, Implies)):
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
        else:
            raise TypeError(f"cannot compile {type(node).__name__}")
    return np.asarray(ops, dtype=np.int8), np.asarray(args, dtype=np.int32)


_BINOP = {And: OP_AND, Or: OP_OR, Implies: OP_IMPLIES, Not: OP_NOT}


# -- loop kernels (compiled by numba, or run as plain Python for debugging) --


# Bit-parallel evaluation: one uint64 word carries 64 valuations. In
# first_model, lane j of the word for block ``base`` is valuation ``base + j``,
# so an atom whose code bit is below 6 has a fixed lane pattern.
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_LANE_PATTERNS = np.array(
    [0xAAAAAAAAAAAAAAAA, 0xCCCCCCCCCCCCCCCC, 0xF0F0F0F0F0F0F0F0,
     0xFF00FF00FF00FF00, 0xFFFF0000FFFF0000, 0xFFFFFFFF00000000],
    dtype=np.uint64,
)


def _run_words(ops, args, atom_words, stack):
    sp = 0
    for i in range(ops.shape[0]):
        op = ops[i]
        if op == OP_ATOM:
            stack[sp] = atom_words[args[i]]
            sp += 1
        elif op == OP_FALSE:
            stack[sp] = _ZERO
            sp += 1
        elif op == OP_TRUE:
            stack[sp] = _ALL
            sp += 1
        elif op == OP_NOT:
            stack[sp - 1] = ~stack[sp - 1]
        else:
            sp -= 1
            if op == OP_AND:
                stack[sp - 1] = stack[sp - 1] & stack[sp]
            elif op == OP_OR:
                stack[sp - 1] = stack[sp - 1] | stack[sp]
            else:
                stack[sp - 1] = ~stack[sp - 1] | stack[sp]
    return stack[0]


def _eval_rows_loop(ops, args, rows):
    m, n = rows.shape
    out = np.zeros(m, dtype=np.bool_)
    stack = np.empty(ops.shape[0] + 1, dtype=np.uint64)
    words = np.empty(max(n, 1), dtype=np.uint64)
    for lo in range(0, m, 64):
        hi = min(lo + 64, m)
        for c in range(n):
            w = _ZERO
            for r in range(lo, hi):
                if rows[r, c]:
                    w |= _ONE << np.uint64(r - lo)
            words[c] = w
        res = _run_words(ops, args, words, stack)
        for r in range(lo, hi):
            out[r] = ((res >> np.uint64(r - lo)) & _ONE) == _ONE
    return out


def _first_model_loop(ops, args, n_atoms, start, stop):
    stack = np.empty(ops.shape[0] + 1, dtype=np.uint64)
    words = np.empty(max(n_atoms, 1), dtype=np.uint64)
    for i in range(n_atoms):
        b = n_atoms - 1 - i
        if b < 6:
            words[i] = _LANE_PATTERNS[b]
    base = start - start % 64
    while base < stop:
        for i in range(n_atoms):
            b = n_atoms - 1 - i
            if b >= 6:
                words[i] = _ALL if (base >> b) & 1 else _ZERO
        valid = _ALL
        if base < start:
            valid &= _ALL << np.uint64(start - base)
        if stop - base < 64:
            valid &= ~(_ALL << np.uint64(stop - base))
        hits = _run_words(ops, args, words, stack) & valid
        if hits != _ZERO:
            j = 0
            while ((hits >> np.uint64(j)) & _ONE) == _ZERO:
                j += 1
            return base + j
        base += 64
    return -1


def _bool_matmul_loop(a, b):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.bool_)
    for i in range(n):
        for j in range(k):
            if a[i, j]:
                for c in range(m):
                    if b[j, c]:
                        out[i, c] = True
    return out


def _closure_loop(r):
    n = r.shape[0]
    c = r.copy()
    for i in range(n):
        c[i, i] = True
    while True:
        nxt = np.zeros((n, n), dtype=np.bool_)
        for i in range(n):
            for j in range(n):
                if c[i, j]:
                    for t in range(n):
                        if c[j, t]:
                            nxt[i, t] = True
        same = True
        for i in range(n):
            for j in range(n):
                if nxt[i, j] != c[i, j]:
                    same = False
        c = nxt
        if same:
            return c


def _preimage_loop(r, s):
    n = r.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        for j in range(r.shape[1]):
            if r[i, j] and s[j]:
                out[i] = True
                break
    return out


# -- numpy kernels --


def _eval_rows_np(ops, args, rows):
    m = rows.shape[0]
    stack: list[np.ndarray] = []
    for op, arg in zip(ops.tolist(), args.tolist()):
        if op == OP_ATOM:
            stack.append(rows[:, arg])
        elif op == OP_FALSE:
            stack.append(np.zeros(m, dtype=bool))
        elif op == OP_TRUE:
            stack.append(np.ones(m, dtype=bool))
        elif op == OP_NOT:
            stack.append(~stack.pop())
        else:
            b = stack.pop()
            a = stack.pop()
            if op == OP_AND:
                stack.append(a & b)
            elif op == OP_OR:
                stack.append(a | b)
            else:
                stack.append(~a | b)
    return np.ascontiguousarray(stack[0], dtype=bool)


def _first_model_np(ops, args, n_atoms, start, stop):
    shifts = (n_atoms - 1 - np.arange(n_atoms, dtype=np.int64))[None, :]
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        codes = np.arange(lo, hi, dtype=np.int64)[:, None]
        rows = ((codes >> shifts) & 1).astype(bool)
        hits = _eval_rows_np(ops, args, rows)
        if hits.any():
            return lo + int(np.argmax(hits))
    return -1


def _bool_matmul_np(a, b):
    return np.matmul(a, b)


def _closure_np(r):
    c = r | np.eye(r.shape[0], dtype=bool)
    while True:
        nxt = np.matmul(c, c)
        if np.array_equal(nxt, c):
            return c
        c = nxt


def _preimage_np(r, s):
    return np.matmul(r, s)


if numba is not None:
    _njit = numba.njit(cache=True, nogil=True)
    _bool_matmul_nb = _njit(_bool_matmul_loop)
    _run_words = _njit(_run_words)
    _eval_rows_nb = _njit(_eval_rows_loop)
    _first_model_nb = _njit(_first_model_loop)
    _closure_nb = _njit(_closure_loop)
    _preimage_nb = _njit(_preimage_loop)

IMPLEMENTATIONS = {
    "numpy": {
        "eval_rows": _eval_rows_np,
        "first_model": _first_model_np,
        "bool_matmul": _bool_matmul_np,
        "closure": _closure_np,
        "preimage": _preimage_np,
    }
}
if numba is not None:
    IMPLEMENTATIONS["numba"] = {
        "eval_rows": _eval_rows_nb,
        "first_model": _first_model_nb,
        "bool_matmul": _bool_matmul_nb,
        "closure": _closure_nb,
        "preimage": _preimage_nb,
    }

BACKEND = "numba" if numba is not None and not _flag("PDLFP_DISABLE_NUMBA") else "numpy"
_impl = IMPLEMENTATIONS[BACKEND]


def eval_rows(ops: np.ndarray, args: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Truth value of a compiled formula for every row of a boolean matrix."""
    rows = np.ascontiguousarray(rows, dtype=np.bool_)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return _impl["eval_rows"](ops, args, rows)


def first_model(ops: np.ndarray, args: np.ndarray, n_atoms: int) -> int:
    """Smallest code in ``[0, 2**n_atoms)`` whose bits satisfy the formula.

    Bit ``n_atoms - 1 - i`` of the code is the value of column ``i``, so
    increasing codes walk valuations in lexicographic order with false
    before true. Returns -1 when no code satisfies.
    """
    return int(_impl["first_model"](ops, args, n_atoms, 0, 1 << n_atoms))


def bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _impl["bool_matmul"](np.ascontiguousarray(a, bool), np.ascontiguousarray(b, bool))


def closure(r: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by repeated squaring of ``I | r``."""
    if r.shape[0] == 0:
        return r.copy()
    return _impl["closure"](np.ascontiguousarray(r, bool))


def preimage(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """States with at least one ``r``-successor in ``s``."""
    if r.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return _impl["preimage"](np.ascontiguousarray(r, bool), np.ascontiguousarray(s, bool))
