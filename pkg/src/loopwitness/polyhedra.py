"""Exact convex polyhedra in constraint and generator form.

Dimensions stay at or below four (transition relations of loops with at
most two variables), plus one homogenization coordinate, so the classic
small-scale algorithms are used throughout:

* H -> V: double description with incremental constraint insertion and
  the rank-based adjacency test;
* V -> H: double description on the polar cone;
* projection: Fourier-Motzkin with Gaussian substitution on equality rows
  and LP redundancy pruning after each eliminated variable;
* recession cone: homogenization of the rows (valid for non-empty closed
  polyhedra).

All sets are immutable; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyPolyhedron, PreconditionError
from .linalg import (Vec, dot, is_zero_vec, primitive, rank, sub, vec, zeros)
from .lp import (EQ, GE, Constraint, Feasible, Infeasible, LPProblem, Optimal,
                 Unbounded, eq, ge, lp_feasible, lp_optimize)
from .qnum import ONE, Q, QNum, ZERO


@dataclass(frozen=True)
class HPolyhedron:
    """Intersection of halfspaces/hyperplanes: rows coeffs.x >= rhs or == rhs."""

    n: int
    rows: tuple

    def member(self, x: Vec) -> bool:
        if len(x) != self.n:
            raise DimensionMismatch(f"point has {len(x)} coords, need {self.n}")
        return all(row.holds(x) for row in self.rows)


@dataclass(frozen=True)
class VPolyhedron:
    """conv(vertices) + cone(rays) + span(lines); empty iff no vertices."""

    n: int
    vertices: tuple
    rays: tuple
    lines: tuple

    def is_empty(self) -> bool:
        return not self.vertices


def _normalize_row(row: Constraint) -> Optional[Constraint]:
    """Primitive-integer scaling; None for rows that are trivially true."""
    if is_zero_vec(row.coeffs):
        sat = row.rhs == 0 if row.relation == EQ else row.rhs <= 0
        if sat:
            return None
        return Constraint(zeros(len(row.coeffs)), GE, ONE)  # canonical absurd
    joint = primitive(tuple(row.coeffs) + (row.rhs,))
    coeffs, rhs = joint[:-1], joint[-1]
    if row.relation == EQ:
        lead = next(c for c in coeffs if c != 0)
        if lead < 0:
            coeffs = tuple(-c for c in coeffs)
            rhs = -rhs
    return Constraint(coeffs, row.relation, rhs)


def hpoly(n: int, rows: Iterable[Constraint]) -> HPolyhedron:
    """Normalized constructor: scaled rows, deduplicated, sorted."""
    out = []
    for row in rows:
        if len(row.coeffs) != n:
            raise DimensionMismatch("row width does not match ambient dimension")
        norm = _normalize_row(row)
        if norm is not None:
            out.append(norm)
    uniq = sorted(set(out), key=lambda r: (r.relation, r.coeffs, r.rhs))
    return HPolyhedron(n, tuple(uniq))


def empty_hpoly(n: int) -> HPolyhedron:
    return HPolyhedron(n, (Constraint(zeros(n), GE, ONE),))


def is_empty(h: HPolyhedron) -> bool:
    return isinstance(lp_feasible(LPProblem(h.n, h.rows)), Infeasible)


def feasible_point(h: HPolyhedron) -> Optional[Vec]:
    res = lp_feasible(LPProblem(h.n, h.rows))
    return res.point if isinstance(res, Feasible) else None


def recession_cone(h: HPolyhedron) -> HPolyhedron:
    """Directions z with h + R+ z inside h: the homogenized row system.

    Undefined (typed error) on empty input; for non-empty closed polyhedra
    the one-point characterization and the all-points definition agree.
    """
    if is_empty(h):
        raise EmptyPolyhedron("recession cone of the empty set is undefined")
    return hpoly(h.n, (Constraint(r.coeffs, r.relation, ZERO) for r in h.rows))


# ---------------------------------------------------------------------------
# Double description


class _ConeDD:
    """Generator representation (lineality + extreme rays) of {z : rows hold},
    all rows homogeneous, built by incremental insertion."""

    def __init__(self, dim: int):
        self.dim = dim
        self.lineality = [tuple(ONE if j == i else ZERO for j in range(dim))
                          for i in range(dim)]
        self.rays: list = []
        self.inserted: list = []  # (normal, relation) in insertion order

    def _tight(self, r: Vec) -> frozenset:
        return frozenset(k for k, (a, _rel) in enumerate(self.inserted)
                         if dot(a, r) == 0)

    def _adjacent(self, r1: Vec, r2: Vec) -> bool:
        common = [self.inserted[k][0] for k in self._tight(r1) & self._tight(r2)]
        need = self.dim - len(self.lineality) - 2
        if need < 0:
            return True
        return rank(tuple(common)) >= need

    def _add_ray(self, out: list, r: Vec) -> None:
        if is_zero_vec(r):
            return
        r = primitive(r)
        if r not in out:
            out.append(r)

    def insert(self, normal: Vec, relation: str) -> None:
        vals_l = [dot(normal, l) for l in self.lineality]
        pivot = next((i for i, v in enumerate(vals_l) if v != 0), None)
        if pivot is not None:
            l0 = self.lineality.pop(pivot)
            v0 = vals_l.pop(pivot)
            if relation == GE and v0 < 0:
                l0, v0 = tuple(-x for x in l0), -v0
            self.lineality = [
                primitive(sub(l, tuple(vals_l[i] / v0 * x for x in l0)))
                for i, l in enumerate(self.lineality)]
            new_rays: list = []
            for r in self.rays:
                vr = dot(normal, r)
                self._add_ray(new_rays,
                              sub(r, tuple(vr / v0 * x for x in l0)))
            if relation == GE:
                self._add_ray(new_rays, l0)
            self.rays = new_rays
        else:
            pos, zero, negv = [], [], []
            for r in self.rays:
                v = dot(normal, r)
                if v > 0:
                    pos.append((r, v))
                elif v == 0:
                    zero.append(r)
                else:
                    negv.append((r, v))
            keep = zero + ([r for r, _ in pos] if relation == GE else [])
            new_rays = []
            for r in keep:
                self._add_ray(new_rays, r)
            for rp, vp in pos:
                for rn, vn in negv:
                    if self._adjacent(rp, rn):
                        combo = tuple(vp * b - vn * a
                                      for a, b in zip(rp, rn))
                        self._add_ray(new_rays, combo)
            self.rays = new_rays
        self.inserted.append((normal, relation))

    def canonical(self) -> tuple:
        """Echelonize the lineality basis and reduce rays modulo it."""
        lin = [list(l) for l in self.lineality]
        pivots = []
        r = 0
        for c in range(self.dim):
            pr = next((i for i in range(r, len(lin)) if lin[i][c] != 0), None)
            if pr is None:
                continue
            lin[r], lin[pr] = lin[pr], lin[r]
            for i in range(len(lin)):
                if i != r and lin[i][c] != 0:
                    f = lin[i][c] / lin[r][c]
                    lin[i] = [x - f * y for x, y in zip(lin[i], lin[r])]
            pivots.append((r, c))
            r += 1
        lin = [primitive(tuple(l)) for l in lin[:r]]
        reduced = []
        for ray in self.rays:
            red = list(ray)
            for (i, c) in pivots:
                if red[c] != 0:
                    f = red[c] / lin[i][c]
                    red = [x - f * y for x, y in zip(red, lin[i])]
            if not is_zero_vec(tuple(red)):
                red = primitive(tuple(red))
                if red not in reduced:
                    reduced.append(red)
        return sorted(lin), sorted(reduced)


def _cone_generators(dim: int, rows: Sequence[Constraint]) -> tuple:
    dd = _ConeDD(dim)
    ordered = sorted(range(len(rows)),
                     key=lambda i: (rows[i].relation != EQ, rows[i].coeffs))
    for i in ordered:
        dd.insert(rows[i].coeffs, rows[i].relation)
    return dd.canonical()


def h_to_v(h: HPolyhedron) -> VPolyhedron:
    """Minimal generator form via double description on the homogenization."""
    hom_rows = [Constraint(tuple(r.coeffs) + (-r.rhs,), r.relation, ZERO)
                for r in h.rows]
    hom_rows.append(ge([ZERO] * h.n + [ONE], 0))
    lines, rays = _cone_generators(h.n + 1, hpoly(h.n + 1, hom_rows).rows)
    verts, dir_rays, dir_lines = [], [], []
    for l in lines:
        dir_lines.append(primitive(l[:-1]))
    for r in rays:
        t = r[-1]
        if t > 0:
            verts.append(tuple(x / t for x in r[:-1]))
        else:
            dir_rays.append(primitive(r[:-1]))
    if not verts:
        return VPolyhedron(h.n, (), (), ())
    return VPolyhedron(h.n, tuple(sorted(verts)), tuple(sorted(dir_rays)),
                       tuple(sorted(dir_lines)))


def v_to_h(v: VPolyhedron) -> HPolyhedron:
    """Facet form via double description on the polar cone."""
    if v.is_empty():
        return empty_hpoly(v.n)
    dual_rows = []
    for p in v.vertices:
        dual_rows.append(ge(tuple(p) + (ONE,), 0))
    for r in v.rays:
        dual_rows.append(ge(tuple(r) + (ZERO,), 0))
    for l in v.lines:
        dual_rows.append(eq(tuple(l) + (ZERO,), 0))
    lines, rays = _cone_generators(v.n + 1, hpoly(v.n + 1, dual_rows).rows)
    out = []
    for a in rays:
        out.append(Constraint(a[:-1], GE, -a[-1]))
    for a in lines:
        out.append(Constraint(a[:-1], EQ, -a[-1]))
    return hpoly(v.n, out)


def mw_decompose(h: HPolyhedron) -> tuple:
    """Split into (compact part, recession part), recombining to h exactly."""
    if is_empty(h):
        raise EmptyPolyhedron("cannot decompose the empty set")
    gen = h_to_v(h)
    compact = VPolyhedron(h.n, gen.vertices, (), ())
    cone = VPolyhedron(h.n, (zeros(h.n),), gen.rays, gen.lines)
    return compact, cone


# ---------------------------------------------------------------------------
# Projection


def _row_implied(n: int, others: Sequence[Constraint], row: Constraint) -> bool:
    def lower_bound_holds(coeffs, bound) -> bool:
        res = lp_optimize(LPProblem(n, tuple(others),
                                    tuple(-c for c in coeffs)))
        if isinstance(res, Infeasible):
            return True
        if isinstance(res, Unbounded):
            return False
        return -res.value >= bound

    if row.relation == GE:
        return lower_bound_holds(row.coeffs, row.rhs)
    return (lower_bound_holds(row.coeffs, row.rhs)
            and lower_bound_holds(tuple(-c for c in row.coeffs), -row.rhs))


def prune_redundant(h: HPolyhedron) -> HPolyhedron:
    if is_empty(h):  # every row is vacuously implied; keep the absurd marker
        return empty_hpoly(h.n)
    rows = list(h.rows)
    i = 0
    while i < len(rows):
        others = rows[:i] + rows[i + 1:]
        if others and _row_implied(h.n, others, rows[i]):
            rows.pop(i)
        else:
            i += 1
    return hpoly(h.n, rows)


def _eliminate_var(n: int, rows: Sequence[Constraint], k: int) -> list:
    """One Fourier-Motzkin / Gauss step removing coordinate k (kept in place
    with zero coefficient so coordinates keep their indices)."""
    pivot_eq = next((r for r in rows if r.relation == EQ and r.coeffs[k] != 0),
                    None)
    out = []
    if pivot_eq is not None:
        pk = pivot_eq.coeffs[k]
        for r in rows:
            if r is pivot_eq or r.coeffs[k] == 0:
                if r is not pivot_eq:
                    out.append(r)
                continue
            f = r.coeffs[k] / pk
            coeffs = tuple(c - f * pc
                           for c, pc in zip(r.coeffs, pivot_eq.coeffs))
            out.append(Constraint(coeffs, r.relation, r.rhs - f * pivot_eq.rhs))
        return out
    pos, negv = [], []
    for r in rows:
        c = r.coeffs[k]
        if c == 0:
            out.append(r)
        elif c > 0:
            pos.append(r)
        else:
            negv.append(r)
    for rp in pos:
        for rn in negv:
            a, b = rp.coeffs[k], -rn.coeffs[k]
            coeffs = tuple(b * cp + a * cn
                           for cp, cn in zip(rp.coeffs, rn.coeffs))
            out.append(Constraint(coeffs, GE, b * rp.rhs + a * rn.rhs))
    return out


def project(h: HPolyhedron, keep: Iterable[int]) -> HPolyhedron:
    """Exact coordinate projection onto the (sorted) kept coordinates."""
    keep_sorted = sorted(set(keep))
    if not keep_sorted:
        raise PreconditionError("must keep at least one coordinate")
    if any(k < 0 or k >= h.n for k in keep_sorted):
        raise DimensionMismatch("projection coordinate out of range")
    rows = list(h.rows)
    for k in range(h.n):
        if k in keep_sorted:
            continue
        rows = _eliminate_var(h.n, rows, k)
        interim = hpoly(h.n, rows)
        if any(is_zero_vec(r.coeffs) for r in interim.rows):
            return empty_hpoly(len(keep_sorted))  # absurd row: empty input
        interim = prune_redundant(interim)
        rows = list(interim.rows)
    final = []
    for r in rows:
        final.append(Constraint(tuple(r.coeffs[k] for k in keep_sorted),
                                r.relation, r.rhs))
    return hpoly(len(keep_sorted), final)


# ---------------------------------------------------------------------------
# Inclusion tests (LP route, independent of double description)


def implicit_equality_rows(h: HPolyhedron) -> frozenset:
    """Indices of >= rows that hold with equality on the whole set."""
    out = set()
    for i, row in enumerate(h.rows):
        if row.relation == EQ:
            continue
        res = lp_optimize(LPProblem(h.n, h.rows, row.coeffs))
        if isinstance(res, Optimal) and res.value == row.rhs:
            out.add(i)
    return frozenset(out)


def ri_member_hpoly(h: HPolyhedron, x: Vec) -> bool:
    """x in the relative interior: all non-implicit inequalities strict."""
    if is_empty(h):
        raise EmptyPolyhedron("relative interior of the empty set")
    if not h.member(x):
        return False
    implicit = implicit_equality_rows(h)
    return all(row.holds_strictly(x)
               for i, row in enumerate(h.rows)
               if row.relation == GE and i not in implicit)


def hpoly_subset_lp(inner: HPolyhedron, outer: HPolyhedron) -> bool:
    """inner <= outer by bounding each outer row over inner via LP."""
    if inner.n != outer.n:
        raise DimensionMismatch("ambient dimensions differ")
    if is_empty(inner):
        return True

    def lower(coeffs) -> Optional[QNum]:
        res = lp_optimize(LPProblem(inner.n, inner.rows,
                                    tuple(-c for c in coeffs)))
        if isinstance(res, Unbounded):
            return None
        return -res.value

    for row in outer.rows:
        lo = lower(row.coeffs)
        if lo is None or lo < row.rhs:
            return False
        if row.relation == EQ:
            hi = lower(tuple(-c for c in row.coeffs))
            if hi is None or -hi > row.rhs:
                return False
    return True


def hpoly_equal_lp(a: HPolyhedron, b: HPolyhedron) -> bool:
    return hpoly_subset_lp(a, b) and hpoly_subset_lp(b, a)


def vpoly_member_lp(v: VPolyhedron, x: Vec) -> bool:
    """x in conv(vertices)+cone(rays)+span(lines), decided by one LP."""
    if len(x) != v.n:
        raise DimensionMismatch("point dimension mismatch")
    if v.is_empty():
        return False
    nv, nr, nl = len(v.vertices), len(v.rays), len(v.lines)
    nvar = nv + nr + 2 * nl  # lines split into +/- parts to stay sign-free
    rows = []
    for i in range(v.n):
        coeffs = ([p[i] for p in v.vertices] + [r[i] for r in v.rays]
                  + [l[i] for l in v.lines] + [-l[i] for l in v.lines])
        rows.append(eq(coeffs, x[i]))
    rows.append(eq([ONE] * nv + [ZERO] * (nr + 2 * nl), 1))
    for j in range(nvar):
        coeffs = [ZERO] * nvar
        coeffs[j] = ONE
        rows.append(ge(coeffs, 0))
    return isinstance(lp_feasible(LPProblem(nvar, tuple(rows))), Feasible)
