"""Certifying linear programming over exact rationals.

Two-phase primal simplex with Bland's pivoting rule, which guarantees
termination under degeneracy (a real concern with exact arithmetic, where
ties are exact rather than washed out by rounding).  Variables are free;
the standard-form split into nonnegative parts happens internally.

Every result is re-checked by substitution before being returned:

* Feasible  -- the point satisfies every row exactly;
* Infeasible -- the Farkas multipliers are sign-correct and combine the
  rows into 0 >= positive;
* Optimal   -- the point is feasible and its objective value matches;
* Unbounded -- the ray satisfies the homogenized rows and strictly
  improves the objective.

A certificate failing its own check raises InternalCheckError: that is a
bug in the solver, never a property of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import DimensionMismatch, InternalCheckError, PreconditionError
from .linalg import Vec, dot, vec, zeros
from .qnum import ONE, Q, QNum, ZERO

GE = ">="
EQ = "=="


@dataclass(frozen=True)
class Constraint:
    """A single row: coeffs . x >= rhs  (or == rhs)."""

    coeffs: Vec
    relation: str
    rhs: QNum

    def holds(self, point: Vec) -> bool:
        lhs = dot(self.coeffs, point)
        return lhs == self.rhs if self.relation == EQ else lhs >= self.rhs

    def holds_strictly(self, point: Vec) -> bool:
        lhs = dot(self.coeffs, point)
        return lhs == self.rhs if self.relation == EQ else lhs > self.rhs


def ge(coeffs, rhs) -> Constraint:
    return Constraint(vec(coeffs), GE, Q(rhs))


def eq(coeffs, rhs) -> Constraint:
    return Constraint(vec(coeffs), EQ, Q(rhs))


@dataclass(frozen=True)
class LPProblem:
    n: int
    rows: tuple
    objective: Optional[Vec] = None  # maximized when present

    def __post_init__(self):
        for row in self.rows:
            if len(row.coeffs) != self.n:
                raise DimensionMismatch(
                    f"row width {len(row.coeffs)} != {self.n} variables")
            if row.relation not in (GE, EQ):
                raise PreconditionError(f"bad relation {row.relation!r}")
        if self.objective is not None and len(self.objective) != self.n:
            raise DimensionMismatch("objective width mismatch")


@dataclass(frozen=True)
class Feasible:
    point: Vec


@dataclass(frozen=True)
class Infeasible:
    farkas: Vec  # one multiplier per input row; >= 0 on inequality rows


@dataclass(frozen=True)
class Unbounded:
    ray: Vec


@dataclass(frozen=True)
class Optimal:
    point: Vec
    value: QNum


LPResult = Union[Feasible, Infeasible, Unbounded, Optimal]


class _Tableau:
    """Simplex tableau in computational standard form.

    Column layout: [x+ (n) | x- (n) | surplus (one per >= row) | artificial
    (one per row)].  Rows are sign-flipped so the rhs is nonnegative; the
    flip signs are kept so Farkas multipliers can be mapped back onto the
    caller's rows.
    """

    def __init__(self, problem: LPProblem):
        self.problem = problem
        n = problem.n
        m = len(problem.rows)
        self.n = n
        self.m = m
        self.surplus_col = {}
        col = 2 * n
        for i, row in enumerate(problem.rows):
            if row.relation == GE:
                self.surplus_col[i] = col
                col += 1
        self.art0 = col
        self.ncols = col + m
        self.flips = []
        self.rows = []
        self.basis = []
        for i, row in enumerate(problem.rows):
            flip = -ONE if row.rhs < 0 else ONE
            self.flips.append(flip)
            t = [ZERO] * (self.ncols + 1)
            for j, c in enumerate(row.coeffs):
                if c:
                    t[j] = flip * c
                    t[n + j] = -flip * c
            if i in self.surplus_col:
                t[self.surplus_col[i]] = -flip
            t[self.art0 + i] = ONE
            t[self.ncols] = flip * row.rhs
            self.rows.append(t)
            self.basis.append(self.art0 + i)
        self.live_rows = list(range(m))
        self.allowed = [True] * self.ncols

    def _reduced_costs(self, cost):
        z = list(cost) + [ZERO]
        for r in self.live_rows:
            cb = cost[self.basis[r]]
            if cb:
                row = self.rows[r]
                for j in range(self.ncols + 1):
                    if row[j]:
                        z[j] -= cb * row[j]
        return z

    def _pivot(self, z, r, c):
        row = self.rows[r]
        inv = ONE / row[c]
        if inv != 1:
            for j in range(self.ncols + 1):
                if row[j]:
                    row[j] *= inv
        for rr in self.live_rows:
            if rr != r and self.rows[rr][c]:
                f = self.rows[rr][c]
                other = self.rows[rr]
                for j in range(self.ncols + 1):
                    if row[j]:
                        other[j] -= f * row[j]
        if z[c]:
            f = z[c]
            for j in range(self.ncols + 1):
                if row[j]:
                    z[j] -= f * row[j]
        self.basis[r] = c

    def _run(self, cost):
        """Bland-rule simplex for min cost.x; returns (z, entering_or_None).

        A non-None second component reports an unbounded direction: the
        entering column whose tableau column has no positive entry.
        """
        z = self._reduced_costs(cost)
        while True:
            enter = next((j for j in range(self.ncols)
                          if self.allowed[j] and z[j] < 0), None)
            if enter is None:
                return z, None
            best = None
            for r in self.live_rows:
                a = self.rows[r][enter]
                if a > 0:
                    ratio = self.rows[r][self.ncols] / a
                    if best is None or ratio < best[0] or (
                            ratio == best[0] and self.basis[r] < best[1]):
                        best = (ratio, self.basis[r], r)
            if best is None:
                return z, enter
            self._pivot(z, best[2], enter)

    def phase1(self):
        cost = [ZERO] * self.ncols
        for j in range(self.art0, self.ncols):
            cost[j] = ONE
        z, enter = self._run(cost)
        if enter is not None:  # phase 1 objective is bounded below by 0
            raise InternalCheckError("phase-1 simplex reported unbounded")
        value = -z[self.ncols]
        if value > 0:
            duals = [ONE - z[self.art0 + i] for i in range(self.m)]
            farkas = tuple(duals[i] * self.flips[i] for i in range(self.m))
            return farkas
        # Feasible: drive leftover artificials out of the basis.
        for r in list(self.live_rows):
            if self.basis[r] >= self.art0:
                c = next((j for j in range(self.art0)
                          if self.rows[r][j] != 0), None)
                if c is None:
                    self.live_rows.remove(r)  # redundant 0 = 0 row
                else:
                    self._pivot(z, r, c)
        for j in range(self.art0, self.ncols):
            self.allowed[j] = False
        return None

    def solution(self) -> Vec:
        vals = [ZERO] * self.ncols
        for r in self.live_rows:
            vals[self.basis[r]] = self.rows[r][self.ncols]
        return tuple(vals[j] - vals[self.n + j] for j in range(self.n))

    def ray(self, enter) -> Vec:
        d = [ZERO] * self.ncols
        d[enter] = ONE
        for r in self.live_rows:
            d[self.basis[r]] = -self.rows[r][enter]
        return tuple(d[j] - d[self.n + j] for j in range(self.n))


def _check_feasible(problem: LPProblem, point: Vec) -> None:
    for i, row in enumerate(problem.rows):
        if not row.holds(point):
            raise InternalCheckError(f"returned point violates row {i}")


def _check_farkas(problem: LPProblem, farkas: Vec) -> None:
    if len(farkas) != len(problem.rows):
        raise InternalCheckError("farkas length mismatch")
    combo = [ZERO] * problem.n
    rhs = ZERO
    for mult, row in zip(farkas, problem.rows):
        if row.relation == GE and mult < 0:
            raise InternalCheckError("negative multiplier on inequality row")
        if mult:
            for j, c in enumerate(row.coeffs):
                combo[j] += mult * c
            rhs += mult * row.rhs
    if any(c != 0 for c in combo) or rhs <= 0:
        raise InternalCheckError("farkas combination is not 0 >= positive")


def _check_ray(problem: LPProblem, ray: Vec) -> None:
    for i, row in enumerate(problem.rows):
        val = dot(row.coeffs, ray)
        if row.relation == EQ:
            if val != 0:
                raise InternalCheckError(f"ray breaks equality row {i}")
        elif val < 0:
            raise InternalCheckError(f"ray leaves halfspace of row {i}")
    if dot(problem.objective, ray) <= 0:
        raise InternalCheckError("ray does not improve the objective")


def lp_feasible(problem: LPProblem) -> LPResult:
    """Exact feasibility: Feasible(point) or Infeasible(farkas)."""
    t = _Tableau(problem)
    farkas = t.phase1()
    if farkas is not None:
        _check_farkas(problem, farkas)
        return Infeasible(farkas)
    point = t.solution()
    _check_feasible(problem, point)
    return Feasible(point)


def lp_optimize(problem: LPProblem) -> LPResult:
    """Exact optimization of `maximize objective . x` over the rows."""
    if problem.objective is None:
        raise PreconditionError("lp_optimize needs an objective")
    t = _Tableau(problem)
    farkas = t.phase1()
    if farkas is not None:
        _check_farkas(problem, farkas)
        return Infeasible(farkas)
    cost = [ZERO] * t.ncols
    for j, c in enumerate(problem.objective):
        if c:
            cost[j] = -c  # maximize obj == minimize -obj
            cost[problem.n + j] = c
    z, enter = t._run(cost)
    if enter is not None:
        ray = t.ray(enter)
        _check_ray(problem, ray)
        return Unbounded(ray)
    point = t.solution()
    _check_feasible(problem, point)
    value = dot(problem.objective, point)
    if z[t.ncols] != value:  # objective row tracks -(min -obj) == max obj
        raise InternalCheckError("tableau objective disagrees with point")
    return Optimal(point, value)


def maximize(n: int, rows, objective) -> LPResult:
    return lp_optimize(LPProblem(n, tuple(rows), vec(objective)))


def feasible_point(n: int, rows) -> Optional[Vec]:
    res = lp_feasible(LPProblem(n, tuple(rows)))
    return res.point if isinstance(res, Feasible) else None
