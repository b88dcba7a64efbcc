"""Fixed-parameter satisfiability for propositional formulas and a finite-frame
evaluator for propositional dynamic logic."""

from .formulas import (
    And,
    Atom,
    AtomProg,
    Box,
    Choice,
    ConstFalse,
    Fragment,
    FragmentClass,
    Implies,
    Not,
    NotInFragment,
    Or,
    SatResult,
    Seq,
    Star,
    Test,
    classify_fragment,
    count_negations,
    evaluate,
    free_atoms,
)
from .fp_sat import (
    brute_force_sat,
    negative_term_sweep,
    solve_and_only,
    solve_one_negation,
    solve_or_only,
    solve_positive,
    solve_two_negations,
)
from .kripke import KripkeFrame, eval_formula, eval_program, model_check, pdl_nnf, random_frame
from .normal_forms import CapExceeded, to_cnf, to_dnf, to_nnf
from .parser import ParseError, parse_formula, parse_frame, print_formula
from .schaefer import (
    SchaeferClass,
    XorSystem,
    classify_schaefer,
    solve_2sat,
    solve_horn_family,
    solve_xor,
)

__version__ = "0.1.0"
