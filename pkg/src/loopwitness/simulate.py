"""Finite run prefixes and numeric direction estimation.

These are heuristics feeding the two-dimensional witness proposers; all
arithmetic is exact, but the *conclusions* (dominant directions, growth
ratios) are finite-prefix surrogates for asymptotic quantities and carry
no soundness weight on their own.  Every consumer re-verifies exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .certificates import RunTrace
from .linalg import Vec, dot, is_zero_vec, maxabs, sub, vec, zeros
from .loops import TransitionRelation
from .lp import (Constraint, EQ, Feasible, GE, LPProblem, Optimal, ge,
                 lp_feasible, lp_optimize)
from .qnum import ONE, Q, QNum, ZERO, simplest_between

DEFAULT_BOX_RADIUS = Q(1024)
CLUSTER_TOL = Q(1, 4)
SNAP_TOL = Q(1, 8)
MIN_TRACE_FOR_ESTIMATE = 8


@dataclass(frozen=True)
class DirectionEstimate:
    """Candidate escape directions, max-abs normalized, with confidence in
    [0, 1] and an estimated per-step growth ratio along each direction."""

    directions: tuple  # of (Vec, QNum confidence)
    growth_ratios: tuple  # of Optional[QNum], parallel to directions


def _step_rows(rel: TransitionRelation, u: Vec, lookahead: bool,
               radius: QNum):
    """Rows over (u', [u''], t) encoding one greedy step from u; t is the
    common slack of the inequality rows at the pair (u, u')."""
    d = rel.d
    nvar = d * (2 if lookahead else 1) + 1
    t_col = nvar - 1
    rows = []

    def row(cols: dict, relation: str, rhs) -> Constraint:
        coeffs = [ZERO] * nvar
        for j, c in cols.items():
            coeffs[j] = c
        return Constraint(tuple(coeffs), relation, Q(rhs))

    for r in rel.K.rows:
        cx, cx2 = r.coeffs[:d], r.coeffs[d:]
        cols = {j: c for j, c in enumerate(cx2) if c}
        if r.relation == GE:
            cols[t_col] = -ONE
        rows.append(row(cols, r.relation, r.rhs - dot(cx, u)))
        if lookahead:
            cols2 = {j: c for j, c in enumerate(cx) if c}
            for j, c in enumerate(cx2):
                if c:
                    cols2[d + j] = cols2.get(d + j, ZERO) + c
            rows.append(row(cols2, r.relation, r.rhs))
    for j in range(d):
        rows.append(row({j: ONE}, GE, u[j] - radius))
        rows.append(row({j: -ONE}, GE, -u[j] - radius))
        if lookahead:
            rows.append(row({d + j: ONE, j: -ONE}, GE, -radius))
            rows.append(row({d + j: -ONE, j: ONE}, GE, -radius))
    rows.append(row({t_col: ONE}, GE, 0))
    rows.append(row({t_col: -ONE}, GE, -radius))
    return nvar, t_col, rows


def _greedy_step(rel: TransitionRelation, u: Vec,
                 radius: QNum) -> Optional[Vec]:
    """Most-robust-then-laziest successor of u, or None at a dead end.

    First maximize the minimum inequality slack (preferring successors that
    themselves have a successor); then, with the slack pinned, take the
    successor of least L1 movement.  Both stages are deterministic.
    """
    d = rel.d
    for lookahead in (True, False):
        nvar, t_col, rows = _step_rows(rel, u, lookahead, radius)
        objective = [ZERO] * nvar
        objective[t_col] = ONE
        res = lp_optimize(LPProblem(nvar, tuple(rows), tuple(objective)))
        if not isinstance(res, Optimal):
            continue
        t_star = res.value
        # Stage two: minimal L1 movement at the achieved slack t*.
        base_n = nvar - 1  # u' (+ u'') columns
        total = base_n + 2 * d
        rows2 = []
        for r in rows:
            coeffs = list(r.coeffs[:t_col]) + [ZERO] * (2 * d)
            rhs = r.rhs - r.coeffs[t_col] * t_star
            rows2.append(Constraint(tuple(coeffs), r.relation, rhs))
        for j in range(d):
            coeffs = [ZERO] * total
            coeffs[j] = ONE
            coeffs[base_n + 2 * j] = -ONE
            coeffs[base_n + 2 * j + 1] = ONE
            rows2.append(Constraint(tuple(coeffs), EQ, u[j]))
        for j in range(2 * d):
            coeffs = [ZERO] * total
            coeffs[base_n + j] = ONE
            rows2.append(Constraint(tuple(coeffs), GE, ZERO))
        objective2 = [ZERO] * total
        for j in range(2 * d):
            objective2[base_n + j] = -ONE
        res2 = lp_optimize(LPProblem(total, tuple(rows2), tuple(objective2)))
        if isinstance(res2, Optimal):
            return res2.point[:d]
        return res.point[:d]
    return None


def greedy_run(rel: TransitionRelation, start: Vec, n_steps: int,
               radius: QNum = DEFAULT_BOX_RADIUS) -> RunTrace:
    """Deterministic trace u_0.. of at most n_steps steps from `start`;
    stops early at dead ends (a start with no successor gives length 1)."""
    u = vec(start)
    points = [u]
    flags = []
    for _ in range(n_steps):
        nxt = _greedy_step(rel, points[-1], radius)
        if nxt is None:
            break
        flags.append(rel.member(points[-1], nxt))
        points.append(nxt)
    return RunTrace(tuple(points), tuple(flags))


def _snap(value: QNum, tol: QNum) -> QNum:
    return simplest_between(value - tol, value + tol)


def estimate_directions(trace: RunTrace) -> DirectionEstimate:
    """Cluster the max-abs-normalized tail of an unbounded trace.

    Bounded (or too-short) traces yield no directions.  Cluster centroids
    are snapped to low-denominator rationals so downstream exact checks
    see simple candidate vectors rather than noise.
    """
    pts = trace.points
    if len(pts) < MIN_TRACE_FOR_ESTIMATE:
        return DirectionEstimate((), ())
    m_first = maxabs(pts[0])
    m_last = maxabs(pts[-1])
    if m_last < max(4 * max(m_first, ONE), m_first + 32):
        return DirectionEstimate((), ())
    tail_start = len(pts) // 2
    members = [(i, tuple(x / maxabs(pts[i]) for x in pts[i]))
               for i in range(tail_start, len(pts))
               if maxabs(pts[i]) > 0]
    clusters: list = []  # (representative, [indices])
    for i, v in members:
        for rep, idxs in clusters:
            if all(abs(a - b) <= CLUSTER_TOL for a, b in zip(v, rep)):
                idxs.append(i)
                break
        else:
            clusters.append((v, [i]))
    directions = []
    ratios = []
    total = sum(len(idxs) for _, idxs in clusters)
    for rep, idxs in clusters:
        dim = len(rep)
        centroid = tuple(
            sum((tuple(x / maxabs(pts[i]) for x in pts[i])[k]
                 for i in idxs), ZERO) / len(idxs)
            for k in range(dim))
        snapped = tuple(_snap(c, SNAP_TOL) for c in centroid)
        if is_zero_vec(snapped):
            continue
        m = maxabs(snapped)
        direction = tuple(c / m for c in snapped)
        ratio = _growth_ratio(pts, idxs, direction)
        directions.append((direction, Q(len(idxs), total)))
        ratios.append(ratio)
    order = sorted(range(len(directions)),
                   key=lambda k: (-directions[k][1], directions[k][0]))
    return DirectionEstimate(tuple(directions[k] for k in order),
                             tuple(ratios[k] for k in order))


def _growth_ratio(pts, idxs, direction: Vec) -> Optional[QNum]:
    samples = []
    idx_set = set(idxs)
    for i in idxs:
        if i + 1 < len(pts) and (i + 1) in idx_set:
            lo = dot(pts[i], direction)
            hi = dot(pts[i + 1], direction)
            if lo != 0:
                samples.append(hi / lo)
    if not samples:
        return None
    samples.sort()
    return samples[(len(samples) - 1) // 2]
