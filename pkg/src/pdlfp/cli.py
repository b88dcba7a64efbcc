"""Command-line interface: ``pdlfp <command> ...``.

Exit codes: 0 success / SAT / true, 1 UNSAT / false / mismatches found,
2 usage or input error, 3 cap or atom limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import fp_sat, generators
from .formulas import (
    And,
    Fragment,
    Not,
    NotInFragment,
    Or,
    SatResult,
    classify_fragment,
    count_negations,
    evaluate,
    free_atoms,
    has_fragment,
    is_propositional,
)
from .kripke import eval_formula, model_check, pdl_nnf
from .normal_forms import DEFAULT_CAP, CapExceeded, to_cnf, to_nnf
from .parser import FrameError, ParseError, parse_formula, parse_frame, print_formula
from .schaefer import (
    ClauseClassError,
    HornMode,
    SchaeferClass,
    classify_schaefer,
    parse_xor,
    solve_2sat,
    solve_horn_family,
    solve_xor,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

SOLVERS = ("auto", "positive", "one-neg", "two-neg", "and-only", "or-only",
           "horn", "dual-horn", "2sat", "brute")
FRAGMENTS = ("positive", "one-neg", "two-neg", "and-only", "or-only", "case4",
             "horn", "dual-horn", "2sat", "xor")


class UsageError(Exception):
    pass


def _read_formula(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_formula(text)


def _clause_cap(args) -> int:
    if getattr(args, "clause_cap", None):
        return args.clause_cap
    env = os.environ.get("PDLFP_CLAUSE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PDLFP_CLAUSE_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP


def _fmt_classes(classes) -> str:
    return " ".join(sorted(str(c) for c in classes))


def _schaefer_solve(f, cap: int) -> tuple[SatResult, str]:
    cnf = to_cnf(f, cap)
    classes = classify_schaefer(f, cnf)
    universe = free_atoms(f)
    if SchaeferClass.ALL_FALSE_SAT in classes:
        return SatResult.of(()), "all-false"
    if SchaeferClass.ALL_TRUE_SAT in classes:
        return SatResult.of(universe), "all-true"
    if SchaeferClass.HORN in classes:
        return solve_horn_family(cnf, HornMode.HORN, universe), "horn"
    if SchaeferClass.DUAL_HORN in classes:
        return solve_horn_family(cnf, HornMode.DUAL_HORN, universe), "dual-horn"
    if SchaeferClass.TWO_CNF in classes:
        return solve_2sat(cnf, universe), "2sat"
    raise NotInFragment("no Schaefer class applies")


def solve_with(
    f, solver: str, cap: int, atom_limit: int, term_cap: int | None = None
) -> tuple[SatResult, str]:
    """Run one named solver, or pick the most specific applicable one for ``auto``."""
    if solver == "auto":
        k = count_negations(f)
        plain = is_propositional(f)
        if has_fragment(f, Fragment.POSITIVE):
            return fp_sat.solve_positive(f), "positive"
        if has_fragment(f, Fragment.AND_ONLY):
            return fp_sat.solve_and_only(f), "and-only"
        if has_fragment(f, Fragment.OR_ONLY):
            return fp_sat.solve_or_only(f), "or-only"
        for want, name in ((1, "one-neg"), (2, "two-neg")):
            if k == want:
                try:
                    return solve_with(f, name, cap, atom_limit, term_cap)
                except NotInFragment:
                    pass
        if plain:
            try:
                return _schaefer_solve(f, cap)
            except (NotInFragment, CapExceeded):
                pass
        return fp_sat.brute_force_sat(f, atom_limit), "brute"
    if solver == "positive":
        return fp_sat.solve_positive(f), solver
    if solver == "one-neg":
        return fp_sat.solve_one_negation(f, cap, term_cap), solver
    if solver == "two-neg":
        return fp_sat.solve_two_negations(f, cap, term_cap), solver
    if solver == "and-only":
        return fp_sat.solve_and_only(f), solver
    if solver == "or-only":
        return fp_sat.solve_or_only(f), solver
    if solver == "brute":
        return fp_sat.brute_force_sat(f, atom_limit), solver
    if not is_propositional(f):
        raise NotInFragment("propositional formulas only")
    cnf = to_cnf(f, cap)
    if solver in ("horn", "dual-horn"):
        mode = HornMode.HORN if solver == "horn" else HornMode.DUAL_HORN
        return solve_horn_family(cnf, mode, free_atoms(f)), solver
    return solve_2sat(cnf, free_atoms(f)), solver


def cmd_parse(args, out) -> int:
    out.write(print_formula(_read_formula(args.file)) + "\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    f = _read_formula(args.file)
    out.write(f"fragments: {_fmt_classes(classify_fragment(f))}\n")
    if args.schaefer:
        if not is_propositional(f):
            raise UsageError("--schaefer needs a propositional formula")
        cnf = to_cnf(f, _clause_cap(args))
        out.write(f"schaefer: {_fmt_classes(classify_schaefer(f, cnf))}\n")
    return EXIT_OK


def cmd_solve(args, out) -> int:
    f = _read_formula(args.file)
    if not is_propositional(f):
        raise UsageError("solve needs a propositional formula (no [program] boxes)")
    result, used = solve_with(
        f, args.solver, _clause_cap(args), args.atom_limit, args.term_cap
    )
    if args.json:
        payload = {
            "status": "SAT" if result.sat else "UNSAT",
            "witness": sorted(result.witness) if result.sat else None,
            "solver": used,
            "fragment": sorted(str(c) for c in classify_fragment(f)),
        }
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(str(result) + "\n")
    return EXIT_OK if result.sat else EXIT_FALSE


def cmd_xor_solve(args, out) -> int:
    try:
        system = parse_xor(Path(args.file).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    result = solve_xor(system)
    out.write(str(result) + "\n")
    return EXIT_OK if result.sat else EXIT_FALSE


def cmd_check(args, out) -> int:
    try:
        frame = parse_frame(Path(args.frame).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.frame}: {exc.strerror}") from exc
    f = _read_formula(args.file)
    if args.state is None:
        holds = eval_formula(frame, f)
        out.write(" ".join(s for s in sorted(holds)) + "\n")
        return EXIT_OK
    ok = model_check(frame, args.state, f)
    out.write(("true" if ok else "false") + "\n")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_nnf(args, out) -> int:
    f = _read_formula(args.file)
    if args.pdl:
        out.write(print_formula(pdl_nnf(f)) + "\n")
        return EXIT_OK
    if not is_propositional(f):
        raise UsageError("formula has [program] boxes; use --pdl")
    out.write(print_formula(to_nnf(f)) + "\n")
    return EXIT_OK


def _fragment_instance(rng, fragment: str):
    """One random instance plus a function deciding it with the fragment's own solver."""
    n_atoms = int(rng.integers(1, 13))
    depth = int(rng.integers(2, 9))
    if fragment == "positive":
        f = generators.random_formula(rng, n_atoms, depth, 0)
        return f, fp_sat.solve_positive
    if fragment in ("one-neg", "two-neg"):
        k = 1 if fragment == "one-neg" else 2
        f = generators.random_formula(rng, n_atoms, depth, k, const_prob=0.05)
        solver = fp_sat.solve_one_negation if k == 1 else fp_sat.solve_two_negations
        return f, solver
    if fragment == "case4":
        return case4_instance(rng), fp_sat.solve_one_negation
    if fragment in ("and-only", "or-only"):
        k = int(rng.integers(0, 6))
        op = And if fragment == "and-only" else Or
        f = generators.random_formula(rng, n_atoms, max(depth, k), k, ops=(op,))
        return f, fp_sat.solve_and_only if op is And else fp_sat.solve_or_only
    n_clauses = int(rng.integers(1, 25))
    if fragment == "horn":
        cnf = generators.random_cnf(rng, n_atoms, n_clauses, width=3, max_pos=1)
        return cnf.to_formula(), lambda g: solve_horn_family(cnf, HornMode.HORN)
    if fragment == "dual-horn":
        cnf = generators.random_cnf(rng, n_atoms, n_clauses, width=3, max_neg=1)
        return cnf.to_formula(), lambda g: solve_horn_family(cnf, HornMode.DUAL_HORN)
    if fragment == "2sat":
        cnf = generators.random_cnf(rng, n_atoms, n_clauses, width=2)
        return cnf.to_formula(), lambda g: solve_2sat(cnf)
    raise UsageError(f"unknown fragment {fragment!r}")


def case4_instance(rng, max_atoms: int = 12):
    """Random ``P & ~G`` whose single negation lands in case 4."""
    while True:
        n = int(rng.integers(2, max_atoms + 1))
        p = generators.random_formula(rng, n, int(rng.integers(1, 5)), 0)
        g = generators.random_formula(rng, n, int(rng.integers(1, 5)), 0)
        f = And(p, Not(g))
        if fp_sat.one_negation_case(f)[0] is fp_sat.OneNegationCase.BEFORE_CONJUNCTION_GROUP:
            return f


def _xor_mismatch(rng) -> bool:
    from itertools import product

    n = int(rng.integers(1, 13))
    system = generators.random_xor(rng, n, int(rng.integers(0, 21)))
    names = sorted(system.universe)
    expect = any(
        system.satisfied_by({a for a, b in zip(names, bits) if b})
        for bits in product((0, 1), repeat=len(names))
    )
    got = solve_xor(system)
    return got.sat != expect or (got.sat and not system.satisfied_by(got.witness))


def oracle_mismatches(fragment: str, count: int, seed: int) -> int:
    """Random instances in a fragment whose verdict or witness disagrees with brute force."""
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(count):
        if fragment == "xor":
            bad += _xor_mismatch(rng)
            continue
        f, solve = _fragment_instance(rng, fragment)
        got = solve(f)
        expect = fp_sat.brute_force_sat(f)
        if got.sat != expect.sat or (got.sat and not evaluate(f, got.witness)):
            bad += 1
    return bad


def cmd_oracle_diff(args, out) -> int:
    bad = oracle_mismatches(args.fragment, args.count, args.seed)
    out.write(f"mismatches: {bad}\n")
    return EXIT_OK if bad == 0 else EXIT_FALSE


def bench_rows(k_max: int, atoms: int, repeats: int = 5, seed: int = 0, formulas: int = 5):
    """Yield ``(k, atoms, candidates, micros)``; each k is run at ``atoms // 2`` and ``atoms``.

    Instances are unsatisfiable by construction so every guess is examined.
    ``micros`` is the best of ``repeats`` timings of solving ``formulas``
    random instances; ``candidates`` is the largest count any of them examined.
    """
    rng = np.random.default_rng(seed)
    fp_sat.solve_and_only(generators.sized_and_only(rng, 4, 1))  # JIT warm-up
    for k in range(1, k_max + 1):
        for n in sorted({max(k + 1, atoms // 2), max(k + 1, atoms)}):
            batch = [generators.sized_and_only(rng, n, k, worst_case=True) for _ in range(formulas)]
            best = float("inf")
            most = 0
            for _ in range(repeats):
                t0 = time.perf_counter()
                results = [fp_sat.solve_and_only(f) for f in batch]
                best = min(best, time.perf_counter() - t0)
                most = max(most, max(r.candidates for r in results))
            yield k, n, most, best * 1e6


def cmd_bench(args, out) -> int:
    if args.fragment != "and-only":
        raise UsageError("bench supports --fragment and-only")
    out.write("k,atoms,candidates,micros\n")
    for k, n, cands, micros in bench_rows(args.k_max, args.atoms, args.repeats, args.seed):
        out.write(f"{k},{n},{cands},{micros:.0f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdlfp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="echo the canonical form of a formula file")
    s.add_argument("file")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("classify", help="print fragment (and Schaefer) classes")
    s.add_argument("file")
    s.add_argument("--schaefer", action="store_true")
    s.add_argument("--clause-cap", type=int)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="decide satisfiability of a formula file")
    s.add_argument("file")
    s.add_argument("--solver", choices=SOLVERS, default="auto")
    s.add_argument("--json", action="store_true")
    s.add_argument("--clause-cap", type=int)
    s.add_argument("--term-cap", type=int)
    s.add_argument("--atom-limit", type=int, default=fp_sat.DEFAULT_ATOM_LIMIT)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("xor-solve", help="solve a system of GF(2) equations")
    s.add_argument("file")
    s.set_defaults(func=cmd_xor_solve)

    s = sub.add_parser("check", help="model-check a formula on a Kripke frame")
    s.add_argument("--frame", required=True)
    s.add_argument("--state", help="omit to print every state where the formula holds")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("nnf", help="push negations onto atoms")
    s.add_argument("file")
    s.add_argument("--pdl", action="store_true", help="use the test-box rewrite for PDL")
    s.set_defaults(func=cmd_nnf)

    s = sub.add_parser("oracle-diff", help="compare a fragment solver with brute force")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--fragment", choices=FRAGMENTS, required=True)
    s.set_defaults(func=cmd_oracle_diff)

    s = sub.add_parser("bench", help="candidate counts and timings for the AND-only solver")
    s.add_argument("--fragment", default="and-only")
    s.add_argument("--k-max", type=int, default=8)
    s.add_argument("--atoms", type=int, default=200)
    s.add_argument("--repeats", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)
    return p


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (CapExceeded, fp_sat.AtomLimitExceeded) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_LIMIT
    except (UsageError, ParseError, FrameError, NotInFragment, ClauseClassError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
