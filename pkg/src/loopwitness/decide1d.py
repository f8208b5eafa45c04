"""Complete exact decision procedure for one-variable loops.

In dimension one every closed cone is {0}, R+, R- or R, so witness
existence reduces to finitely many questions about the recession cone of
the transition relation, each answerable by small LPs:

  0. a fixed point (x, x) in K certifies a bounded run;
  1. cone R+: some a > 0 with (1, a) in rec(K), plus a seed pair
     (x, y) in K with y >= x;
  2. cone R-: symmetric, with (-1, -a) in rec(K) and a seed y <= x;
  3. cone R: some a != 0 stepping both signs, plus any pair in K.

If every case fails the loop terminates; the cone list is exhaustive, so
no Unknown verdict can arise here.  Every emitted witness re-verifies
before leaving this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .certificates import (FixedPointResult, Witness, annotate_trace,
                           check_run, fixed_point_witness, verify_witness,
                           witness_to_run)
from .cones import cone_canonical
from .errors import InternalCheckError, PreconditionError
from .linalg import mat, vec
from .loops import TransitionRelation
from .lp import (Constraint, Feasible, Infeasible, LPProblem, Optimal,
                 Unbounded, ge, lp_feasible, lp_optimize)
from .qnum import ONE, Q, QNum, ZERO, qstr
from .verdicts import (CONE_ENUMERATION_1D, FIXED_POINT, NonTerminating,
                       Terminating, Verdict)
from .polyhedra import is_empty

RUN_PREFIX_STEPS = 64


@dataclass(frozen=True)
class Interval1:
    """Closed, possibly unbounded or empty, set {a : (s, a*s) in rec(K)}."""

    empty: bool
    lower: Optional[QNum]  # None = unbounded below (when non-empty)
    upper: Optional[QNum]  # None = unbounded above
    lower_closed: bool = True
    upper_closed: bool = True

    def pick_positive(self) -> Optional[QNum]:
        if self.empty:
            return None
        if self.upper is None:
            base = self.lower if self.lower is not None and self.lower > 0 \
                else ZERO
            return base + 1
        return self.upper if self.upper > 0 else None

    def pick_nonzero(self) -> Optional[QNum]:
        pos = self.pick_positive()
        if pos is not None:
            return pos
        if self.empty:
            return None
        if self.lower is None:
            base = self.upper if self.upper is not None and self.upper < 0 \
                else ZERO
            return base - 1
        return self.lower if self.lower < 0 else None


def slope_interval(rel: TransitionRelation, sigma: int) -> Interval1:
    """All a with (sigma, a*sigma) in rec(K), as an exact interval."""
    if rel.d != 1:
        raise PreconditionError("slope intervals only exist in dimension 1")
    s = Q(sigma)
    rows = tuple(
        Constraint((s * r.coeffs[1],), r.relation, -s * r.coeffs[0])
        for r in rel.K.rows)
    if isinstance(lp_feasible(LPProblem(1, rows)), Infeasible):
        return Interval1(True, None, None)
    hi = lp_optimize(LPProblem(1, rows, (ONE,)))
    lo = lp_optimize(LPProblem(1, rows, (-ONE,)))
    upper = hi.value if isinstance(hi, Optimal) else None
    lower = -lo.value if isinstance(lo, Optimal) else None
    return Interval1(False, lower, upper)


def _seed_pair(rel: TransitionRelation, direction: int):
    """A pair (x, y) in K with y - x on the requested side (0 = any)."""
    rows = list(rel.K.rows)
    if direction > 0:
        rows.append(ge([-ONE, ONE], 0))
    elif direction < 0:
        rows.append(ge([ONE, -ONE], 0))
    res = lp_feasible(LPProblem(2, tuple(rows)))
    return res.point if isinstance(res, Feasible) else None


def _emit(rel: TransitionRelation, wit: Witness, method: str) -> Verdict:
    report = verify_witness(rel, wit)
    if not report.ok:
        raise InternalCheckError(
            f"constructed 1-d witness failed verification: {report.failures()}")
    trace = annotate_trace(rel, witness_to_run(wit, RUN_PREFIX_STEPS).points)
    if not check_run(rel, trace):
        raise InternalCheckError("verified witness produced an invalid run")
    return NonTerminating(wit, trace, method)


def decide_1d(rel: TransitionRelation) -> Verdict:
    if rel.d != 1:
        raise PreconditionError("decide_1d requires a one-variable loop")
    if is_empty(rel.K):
        return Terminating(CONE_ENUMERATION_1D,
                           {"reason": "transition relation is empty"})

    fp = fixed_point_witness(rel)
    if fp.witness is not None:
        return _emit(rel, fp.witness, FIXED_POINT)
    artifacts = {"fixedPointFarkas": [qstr(m) for m in fp.refutation]}

    # Cone R+: climb with slope a > 0 from a non-decreasing first step.
    a = slope_interval(rel, +1).pick_positive()
    if a is not None:
        seed = _seed_pair(rel, +1)
        if seed is not None:
            wit = Witness(mat([[a]]), cone_canonical([vec([1])]),
                          (seed[0],), (seed[1],))
            return _emit(rel, wit, CONE_ENUMERATION_1D)

    # Cone R-: descend with slope a > 0 from a non-increasing first step.
    a = slope_interval(rel, -1).pick_positive()
    if a is not None:
        seed = _seed_pair(rel, -1)
        if seed is not None:
            wit = Witness(mat([[a]]), cone_canonical([vec([-1])]),
                          (seed[0],), (seed[1],))
            return _emit(rel, wit, CONE_ENUMERATION_1D)

    # Cone R: both directions must step with the same nonzero slope.
    plus = slope_interval(rel, +1)
    minus = slope_interval(rel, -1)
    both = _intersect(plus, minus)
    a = both.pick_nonzero()
    if a is not None:
        seed = _seed_pair(rel, 0)
        if seed is not None:
            wit = Witness(mat([[a]]), cone_canonical([vec([1]), vec([-1])]),
                          (seed[0],), (seed[1],))
            return _emit(rel, wit, CONE_ENUMERATION_1D)

    return Terminating(CONE_ENUMERATION_1D, artifacts)


def _intersect(a: Interval1, b: Interval1) -> Interval1:
    if a.empty or b.empty:
        return Interval1(True, None, None)
    lowers = [x for x in (a.lower, b.lower) if x is not None]
    uppers = [x for x in (a.upper, b.upper) if x is not None]
    lower = max(lowers) if lowers else None
    upper = min(uppers) if uppers else None
    if lower is not None and upper is not None and lower > upper:
        return Interval1(True, None, None)
    return Interval1(False, lower, upper)
