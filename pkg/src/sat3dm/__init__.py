"""Linear-size 3SAT -> 3DM reduction, the classical baseline, and 3DM -> X3C.

Exact solvers and brute-force oracles check both certificate directions.
"""

from .formula import Formula, Literal, StrictFormula, normalize, parse_dimacs, emit_dimacs, evaluate
from .matching import TdmInstance, X3cInstance, solve_exact, solve_x3c, to_x3c, verify_cover, verify_matching
from .reduce_gj import gj_size
from .reduce_linear import ReductionMap, embed_assignment, lift_matching, reduce
from .oracle import GenConfig, equivalence_check, gen_random, sat_brute

__version__ = "0.1.0"

__all__ = [
    "Formula", "Literal", "StrictFormula", "normalize", "parse_dimacs", "emit_dimacs", "evaluate",
    "TdmInstance", "X3cInstance", "solve_exact", "solve_x3c", "to_x3c", "verify_cover", "verify_matching",
    "gj_size", "ReductionMap", "embed_assignment", "lift_matching", "reduce",
    "GenConfig", "equivalence_check", "gen_random", "sat_brute",
]
