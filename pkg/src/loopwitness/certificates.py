"""Non-termination witnesses: exact verification, run construction, JSON.

A witness (M, C, v, w) against a transition relation K asserts:

  1. M maps the cone C into itself;
  2. every cone direction x steps inside the recession cone: (x, Mx);
  3. the seed pair (v, w) lies in K;
  4. the first step w - v lies in C.

Conditions 2 is checked on generators only (both signs for lineality
vectors): x |-> (x, Mx) is linear and the recession cone is convex and
conic, so generator membership extends to every conic combination.  This
reduction is what makes the check finite; it is unit-tested against
random conic combinations.

A verified witness unrolls into an infinite run; `witness_to_run`
materializes a finite prefix by the difference recurrence
u_{n+2} - u_{n+1} = M (u_{n+1} - u_n), and `check_run` re-validates any
prefix against K with no tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .cones import Cone2, cone_member, zero_cone
from .errors import DimensionMismatch, InternalCheckError
from .linalg import Mat, Vec, add, identity, mat, matvec, neg, sub, vec
from .loops import ConstraintLoop, TransitionRelation, loop_hash
from .lp import Constraint, Feasible, LPProblem, eq, lp_feasible
from .polyhedra import HPolyhedron
from .qnum import Q, ZERO, qstr

CERT_VERSION = 1


@dataclass(frozen=True)
class Witness:
    m: Mat
    cone: Cone2
    v: Vec
    w: Vec


@dataclass(frozen=True)
class RunTrace:
    points: tuple              # u_0 .. u_N
    step_membership: tuple     # exact (u_n, u_{n+1}) in K, when annotated

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ConditionResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    conditions: tuple

    def failures(self) -> tuple:
        return tuple(c for c in self.conditions if not c.ok)


def _rec_rows(K: HPolyhedron) -> tuple:
    return tuple(Constraint(r.coeffs, r.relation, ZERO) for r in K.rows)


def _satisfies(rows, point: Vec) -> Optional[int]:
    for i, row in enumerate(rows):
        if not row.holds(point):
            return i
    return None


def verify_witness(rel: TransitionRelation, wit: Witness) -> VerifyReport:
    """Evaluate all four witness conditions exactly; never raises on a
    merely-invalid witness, only on dimension mismatches."""
    d = rel.d
    if (len(wit.m) != d or any(len(row) != d for row in wit.m)
            or wit.cone.dim != d or len(wit.v) != d or len(wit.w) != d):
        raise DimensionMismatch("witness does not match relation dimension")
    conditions = []

    ok1 = True
    detail1 = ""
    for g in wit.cone.generators:
        if not cone_member(wit.cone, matvec(wit.m, g)):
            ok1, detail1 = False, f"image of generator {g} leaves the cone"
            break
    if ok1:
        for l in wit.cone.lineality:
            img = matvec(wit.m, l)
            if not (cone_member(wit.cone, img)
                    and cone_member(wit.cone, neg(img))):
                ok1 = False
                detail1 = f"image of lineality vector {l} leaves the cone"
                break
    conditions.append(ConditionResult("cone_mapped_into_itself", ok1, detail1))

    rec = _rec_rows(rel.K)
    ok2 = True
    detail2 = ""
    checks = [(g, matvec(wit.m, g)) for g in wit.cone.generators]
    for l in wit.cone.lineality:
        checks.append((l, matvec(wit.m, l)))
        checks.append((neg(l), neg(matvec(wit.m, l))))
    for x, mx in checks:
        bad = _satisfies(rec, tuple(x) + tuple(mx))
        if bad is not None:
            ok2 = False
            detail2 = f"({x}, M{x}) violates recession row {bad}"
            break
    conditions.append(
        ConditionResult("cone_steps_in_recession_cone", ok2, detail2))

    bad3 = _satisfies(rel.K.rows, tuple(wit.v) + tuple(wit.w))
    conditions.append(ConditionResult(
        "seed_pair_in_relation", bad3 is None,
        "" if bad3 is None else f"(v, w) violates row {bad3}"))

    ok4 = cone_member(wit.cone, sub(wit.w, wit.v))
    conditions.append(ConditionResult(
        "first_step_in_cone", ok4, "" if ok4 else "w - v outside the cone"))

    return VerifyReport(all(c.ok for c in conditions), tuple(conditions))


def witness_to_run(wit: Witness, n_steps: int) -> RunTrace:
    """Exact prefix u_0..u_N of the run induced by the witness."""
    if n_steps < 1:
        raise ValueError("need at least one step")
    points = [wit.v, wit.w]
    delta = sub(wit.w, wit.v)
    for _ in range(n_steps - 1):
        delta = matvec(wit.m, delta)
        points.append(add(points[-1], delta))
    return RunTrace(tuple(points), ())


def annotate_trace(rel: TransitionRelation, points) -> RunTrace:
    pts = tuple(vec(p) for p in points)
    flags = tuple(rel.member(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    return RunTrace(pts, flags)


def check_run(rel: TransitionRelation, trace: RunTrace) -> bool:
    """True iff every consecutive pair of the trace lies in K, exactly."""
    pts = trace.points
    if len(pts) < 2:
        raise ValueError("a run needs at least two points")
    if any(len(p) != rel.d for p in pts):
        raise DimensionMismatch("trace points do not match loop dimension")
    return all(rel.member(pts[i], pts[i + 1]) for i in range(len(pts) - 1))


# ---------------------------------------------------------------------------
# Bounded runs / fixed points


@dataclass(frozen=True)
class FixedPointResult:
    witness: Optional[Witness]
    refutation: Optional[tuple]  # Farkas multipliers over K rows + d diagonal rows


def fixed_point_witness(rel: TransitionRelation) -> FixedPointResult:
    """Decide whether K meets the diagonal x' = x.

    A fixed point yields the bounded-run witness (identity map, zero cone,
    v = w = the point); otherwise the LP's Farkas multipliers exactly
    refute the existence of any bounded infinite run.
    """
    d = rel.d
    rows = list(rel.K.rows)
    for i in range(d):
        coeffs = [ZERO] * (2 * d)
        coeffs[i] = Q(-1)
        coeffs[d + i] = Q(1)
        rows.append(eq(coeffs, 0))
    res = lp_feasible(LPProblem(2 * d, tuple(rows)))
    if isinstance(res, Feasible):
        x = res.point[:d]
        wit = Witness(identity(d), zero_cone(d), x, x)
        report = verify_witness(rel, wit)
        if not report.ok:
            raise InternalCheckError("fixed-point witness failed verification")
        return FixedPointResult(wit, None)
    return FixedPointResult(None, res.farkas)


# ---------------------------------------------------------------------------
# Certificate JSON (stable schema, versioned)


def _vec_json(u: Vec) -> list:
    return [qstr(x) for x in u]


def _mat_json(m: Mat) -> list:
    return [_vec_json(row) for row in m]


def witness_to_json(wit: Witness) -> dict:
    return {
        "M": _mat_json(wit.m),
        "cone": {
            "kind": wit.cone.kind,
            "dim": wit.cone.dim,
            "generators": [_vec_json(g) for g in wit.cone.generators],
            "lineality": [_vec_json(l) for l in wit.cone.lineality],
        },
        "v": _vec_json(wit.v),
        "w": _vec_json(wit.w),
    }


def witness_from_json(payload: dict) -> Witness:
    cone = Cone2(payload["cone"]["kind"], int(payload["cone"]["dim"]),
                 tuple(vec(g) for g in payload["cone"]["generators"]),
                 tuple(vec(l) for l in payload["cone"]["lineality"]))
    return Witness(mat(payload["M"]), cone, vec(payload["v"]),
                   vec(payload["w"]))


def certificate_json(loop: ConstraintLoop, wit: Witness,
                     trace: RunTrace) -> dict:
    return {
        "certVersion": CERT_VERSION,
        "loopSha256": loop_hash(loop),
        "witness": witness_to_json(wit),
        "runPrefix": {
            "points": [_vec_json(p) for p in trace.points],
            "stepMembership": list(trace.step_membership),
        },
    }


def certificate_from_json(payload) -> tuple:
    """(loop hash, witness, run prefix) from a parsed or serialized cert."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    version = payload.get("certVersion")
    if version != CERT_VERSION:
        raise ValueError(f"unsupported certificate version {version!r}")
    wit = witness_from_json(payload["witness"])
    prefix = payload.get("runPrefix", {})
    trace = RunTrace(tuple(vec(p) for p in prefix.get("points", [])),
                     tuple(bool(f) for f in prefix.get("stepMembership", [])))
    return payload["loopSha256"], wit, trace
