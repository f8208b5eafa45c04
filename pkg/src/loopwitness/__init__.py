"""Exact termination analysis for linear constraint loops over the reals.

Loops with at most two variables, guards and bodies given by non-strict
linear constraints over exact rationals.  Non-termination is decided by
searching for a finite geometric witness (a self-mapped cone of step
directions inside the recession cone of the transition relation plus a
seed pair) and verifying it exactly; termination at dimension one is
decided by exhaustive cone enumeration, and at dimension two by an
existential real-arithmetic encoding handed to an external solver whose
answers are rationalized and re-verified.  Verdicts ship machine-checkable
certificates.
"""

from .certificates import (RunTrace, VerifyReport, Witness, check_run,
                           fixed_point_witness, verify_witness,
                           witness_to_run)
from .cones import Cone2, cone_canonical, cone_member, push_into_cone, ri_member
from .config import Config
from .decide1d import decide_1d
from .decide2d import decide, propose_witnesses
from .errors import LoopwitnessError
from .linalg import mat, vec
from .loops import (ConstraintLoop, TransitionRelation, loop_to_relation,
                    parse_loop, pretty_print)
from .lp import LPProblem, lp_feasible, lp_optimize
from .polyhedra import (HPolyhedron, VPolyhedron, h_to_v, hpoly, mw_decompose,
                        project, recession_cone, v_to_h)
from .qnum import Q
from .simulate import estimate_directions, greedy_run
from .smt import encode_witness_exists, rationalize_and_verify, solve_external
from .verdicts import NonTerminating, Terminating, Unknown, Verdict

__all__ = [
    "Cone2", "Config", "ConstraintLoop", "HPolyhedron", "LPProblem",
    "LoopwitnessError", "NonTerminating", "Q", "RunTrace", "Terminating",
    "TransitionRelation", "Unknown", "Verdict", "VerifyReport", "VPolyhedron",
    "Witness", "check_run", "cone_canonical", "cone_member", "decide",
    "decide_1d", "encode_witness_exists", "estimate_directions",
    "fixed_point_witness", "greedy_run", "h_to_v", "hpoly", "loop_to_relation",
    "lp_feasible", "lp_optimize", "mat", "mw_decompose", "parse_loop",
    "pretty_print", "project", "propose_witnesses", "push_into_cone",
    "rationalize_and_verify", "recession_cone", "ri_member", "solve_external",
    "v_to_h", "vec", "verify_witness", "witness_to_run",
]

__version__ = "0.1.0"
