"""Canonical closed convex cones in dimension one and two.

Every cone in the plane is one of six shapes; the canonical form stores a
minimal generator set (primitive integer vectors, deterministic order) so
that witnesses serialize reproducibly.  Canonicalization routes through
the same double-description code used for polyhedra rather than ad-hoc
angle case analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DimensionMismatch, PreconditionError
from .linalg import (Vec, cross2, dot, is_zero_vec, matvec, primitive, vec,
                     zeros)
from .lp import Feasible, LPProblem, eq, ge, lp_feasible
from .polyhedra import HPolyhedron, VPolyhedron, h_to_v, hpoly, v_to_h
from .qnum import ONE, Q, QNum, ZERO

ZERO_CONE = "zero"
RAY = "ray"
LINE = "line"
SECTOR = "sector"
HALF_PLANE = "halfplane"
PLANE = "plane"


@dataclass(frozen=True)
class Cone2:
    """Closed convex cone in R^d, d <= 2, in canonical generator form."""

    kind: str
    dim: int
    generators: tuple  # extreme rays (none for zero/line/plane)
    lineality: tuple   # basis of the lineality space

    def all_directions(self) -> tuple:
        """Generators plus both signs of the lineality basis."""
        out = list(self.generators)
        for l in self.lineality:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(out)


def cone_canonical(rays: Iterable[Vec], lines: Iterable[Vec] = (),
                   dim: Optional[int] = None) -> Cone2:
    """Canonicalize cone(rays) + span(lines); idempotent.

    Zero vectors among the inputs are rejected: a zero generator is always
    a caller bug (the zero cone is spelled with no generators at all).
    """
    rays = [vec(r) for r in rays]
    lines = [vec(l) for l in lines]
    for g in rays + lines:
        if is_zero_vec(g):
            raise PreconditionError("zero vector among cone generators")
    if dim is None:
        if not rays and not lines:
            raise PreconditionError("ambient dimension required for zero cone")
        dim = len((rays + lines)[0])
    if dim not in (1, 2):
        raise DimensionMismatch("cones are supported in dimension 1 and 2")
    for g in rays + lines:
        if len(g) != dim:
            raise DimensionMismatch("generator dimension mismatch")
    vp = VPolyhedron(dim, (zeros(dim),),
                     tuple(primitive(g) for g in rays),
                     tuple(primitive(l) for l in lines))
    minimal = h_to_v(v_to_h(vp))
    gens = tuple(sorted(minimal.rays))
    lin = tuple(sorted(minimal.lines))
    if len(lin) == 2:
        return Cone2(PLANE, dim, (), lin)
    if len(lin) == 1:
        if not gens:
            return Cone2(LINE, dim, (), lin)
        return Cone2(HALF_PLANE, dim, gens, lin)
    if not gens:
        return Cone2(ZERO_CONE, dim, (), ())
    if len(gens) == 1:
        return Cone2(RAY, dim, gens, ())
    # two independent generators: orient counterclockwise for determinism
    g1, g2 = gens
    if cross2(g1, g2) < 0:
        g1, g2 = g2, g1
    return Cone2(SECTOR, dim, (g1, g2), ())


def zero_cone(dim: int) -> Cone2:
    return Cone2(ZERO_CONE, dim, (), ())


def cone_to_hpoly(c: Cone2) -> HPolyhedron:
    """Facet rows a.z >= 0 (plus span equalities) of the cone."""
    return v_to_h(VPolyhedron(c.dim, (zeros(c.dim),), c.generators,
                              c.lineality))


def cone_combination(c: Cone2, v: Vec):
    """Multipliers (per generator, then per lineality vector) writing v as a
    nonnegative/free combination, or None when v is outside the cone."""
    if len(v) != c.dim:
        raise DimensionMismatch("point dimension mismatch")
    ng, nl = len(c.generators), len(c.lineality)
    if ng + nl == 0:
        return () if is_zero_vec(v) else None
    rows = []
    for i in range(c.dim):
        coeffs = [g[i] for g in c.generators] + [l[i] for l in c.lineality]
        rows.append(eq(coeffs, v[i]))
    for j in range(ng):
        coeffs = [ZERO] * (ng + nl)
        coeffs[j] = ONE
        rows.append(ge(coeffs, 0))
    res = lp_feasible(LPProblem(ng + nl, tuple(rows)))
    return res.point if isinstance(res, Feasible) else None


def cone_member(c: Cone2, v: Vec) -> bool:
    """Exact membership via the nonnegative-combination LP."""
    return cone_combination(c, v) is not None


def cone_image(m, c: Cone2) -> Cone2:
    """Image of the cone under a linear map: cone of generator images."""
    gens = [g2 for g in c.generators if not is_zero_vec(g2 := matvec(m, g))]
    lins = [l2 for l in c.lineality if not is_zero_vec(l2 := matvec(m, l))]
    dim = len(m) if m else c.dim
    if not gens and not lins:
        return zero_cone(dim)
    return cone_canonical(gens, lins, dim=dim)


def ri_member_cone(c: Cone2, v: Vec) -> bool:
    """Relative interior membership, by shape."""
    if len(v) != c.dim:
        raise DimensionMismatch("point dimension mismatch")
    if c.kind == ZERO_CONE:
        return is_zero_vec(v)
    if c.kind == PLANE:
        return True
    if c.kind == LINE:
        return _collinear(c.lineality[0], v)
    if c.kind == RAY:
        t = _ratio_along(c.generators[0], v)
        return t is not None and t > 0
    if c.kind == SECTOR:
        ab = _solve2(c.generators[0], c.generators[1], v)
        return ab is not None and ab[0] > 0 and ab[1] > 0
    if c.kind == HALF_PLANE:
        ab = _solve2(c.lineality[0], c.generators[0], v)
        return ab is not None and ab[1] > 0
    raise PreconditionError(f"unknown cone kind {c.kind!r}")


def ri_member(c, v: Vec) -> bool:
    """Relative-interior membership for a cone or an H-polyhedron."""
    from .polyhedra import ri_member_hpoly

    if isinstance(c, Cone2):
        return ri_member_cone(c, v)
    return ri_member_hpoly(c, v)


def _collinear(base: Vec, v: Vec) -> bool:
    return _ratio_along(base, v) is not None


def _ratio_along(base: Vec, v: Vec):
    """t with v == t * base, or None."""
    k = next(i for i, x in enumerate(base) if x != 0)
    t = v[k] / base[k]
    return t if all(v[i] == t * base[i] for i in range(len(base))) else None


def _solve2(a: Vec, b: Vec, v: Vec):
    det = cross2(a, b)
    if det == 0:
        return None
    alpha = cross2(v, b) / det
    beta = cross2(a, v) / det
    return (alpha, beta)


def push_into_cone(c: Cone2, x: Vec, u: Vec) -> QNum:
    """Minimal lam >= 0 with u + lam*x in the cone.

    Requires x in ri(c) with x nonzero and u in span(c); the minimum is
    attained because facet violations are resolved at exact crossings.
    """
    if is_zero_vec(x) or not ri_member_cone(c, x):
        raise PreconditionError("x must be a nonzero relative-interior point")
    if not _in_span(c, u):
        raise PreconditionError("u must lie in the span of the cone")
    lam = ZERO
    for row in cone_to_hpoly(c).rows:
        ax = dot(row.coeffs, x)
        au = dot(row.coeffs, u)
        if row.relation == ">=" and ax > 0 and au < 0:
            needed = -au / ax
            if needed > lam:
                lam = needed
    if not cone_member(c, tuple(ui + lam * xi for ui, xi in zip(u, x))):
        raise PreconditionError("push target unreachable; preconditions broken")
    return lam


def _in_span(c: Cone2, u: Vec) -> bool:
    if is_zero_vec(u):
        return True
    dirs = list(c.generators) + list(c.lineality)
    if not dirs:
        return False
    if len(dirs) == 1 or c.dim == 1:
        return any(_collinear(d, u) for d in dirs)
    return cross2(dirs[0], dirs[1]) != 0 or _collinear(dirs[0], u)
