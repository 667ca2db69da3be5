"""Compact-triplets satisfiability: decomposition, structures, CIC search, zero distribution."""
from .couples import Ccs, CcsSystem, ccs_clear, cts_to_ccs
from .decomposition import (CoverageError, CtFormula, Decomposition, check_k_bound,
                            decompose_with_permutations, group_lines, naive_decompose)
from .formula import (Clause3, DimacsError, Literal, TabularFormula, eval_cnf, eval_subset,
                      parse_dimacs, read_dimacs, to_tabular)
from .inversion import OracleLimitError, apply_cic, full_search_jss, has_nil_set
from .oracle import DiffReport, brute_force, differential_run, fuzz, random_3cnf
from .triplets import Cts, CtsSystem, build_cts, clear, enumerate_sets, unify
from .zero_distribution import SolveResult, SolverDefect, VarState, emit_formula1, solve

__version__ = "0.1.0"

__all__ = [
    "Ccs", "CcsSystem", "ccs_clear", "cts_to_ccs",
    "CoverageError", "CtFormula", "Decomposition", "check_k_bound",
    "decompose_with_permutations", "group_lines", "naive_decompose",
    "Clause3", "DimacsError", "Literal", "TabularFormula", "eval_cnf", "eval_subset",
    "parse_dimacs", "read_dimacs", "to_tabular",
    "OracleLimitError", "apply_cic", "full_search_jss", "has_nil_set",
    "DiffReport", "brute_force", "differential_run", "fuzz", "random_3cnf",
    "Cts", "CtsSystem", "build_cts", "clear", "enumerate_sets", "unify",
    "SolveResult", "SolverDefect", "VarState", "emit_formula1", "solve",
]
