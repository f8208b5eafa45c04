"""Two-variable decision pipeline.

The pipeline is sound unconditionally and complete up to the external
solver: heuristic witness proposers (mirroring the six geometric cases a
non-terminating planar run can fall into) produce candidates that are
*always* re-verified exactly, and the existential-arithmetic encoding is
dispatched to an external solver whose sat models are rationalized and
re-verified before acceptance.  A NonTerminating verdict therefore never
depends on solver correctness; a Terminating verdict at dimension two
records the script hash and solver identity it rests on; everything else
is an honest Unknown.

Case templates for proposals (the fixed-point check runs first):

  2. an escape direction x with (0, x) in the recession cone: solve the
     projected one-variable problem on the orthogonal axis and lift its
     witness, closing the cone with the truncated iterated-image family
     chi_n (chi_{n+2} is a positive multiple of chi_n, so n <= 2 suffices);
  3. a first step along an estimated direction: cone of estimated
     directions, map built from per-generator recession successors;
  5. estimated directions spanning a line: one-variable witness on the
     orthogonal axis, lifted with the line adjoined to the cone;
  6. a single dominant ray x: search slopes a, b >= 0 and c, d with
     (x, ax) and (dx + y, cx + by) in the recession cone and c >= db,
     giving the two-generator cone over x and dx + y.

(The spanning case of the underlying argument collapses into case 3: both
pick the cone of observed directions and per-generator successors.)
"""

from __future__ import annotations

import random
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from .certificates import (RunTrace, Witness, annotate_trace, check_run,
                           fixed_point_witness, verify_witness,
                           witness_to_run)
from .cones import (Cone2, cone_canonical, cone_to_hpoly, zero_cone)
from .config import Config
from .errors import InternalCheckError, UnsupportedDimension
from .linalg import (Mat, Vec, add, cross2, dot, is_zero_vec, mat, matvec,
                     neg, primitive, scale, sub, vec, zeros)
from .loops import TransitionRelation
from .lp import (Constraint, EQ, Feasible, GE, LPProblem, Optimal, Unbounded,
                 lp_feasible, lp_optimize)
from .polyhedra import (HPolyhedron, feasible_point, h_to_v, hpoly, is_empty,
                        project, recession_cone)
from .qnum import ONE, Q, QNum, ZERO, qstr
from .simulate import DirectionEstimate, estimate_directions, greedy_run
from .smt import encode_witness_exists, rationalize_and_verify, solve_external
from .verdicts import (CONE_ENUMERATION_1D, EMPTY_RELATION, FIXED_POINT,
                       HEURISTIC, SMT_MODEL, SOLVER_UNSAT, NonTerminating,
                       Terminating, Unknown, Verdict)
from .decide1d import decide_1d


# ---------------------------------------------------------------------------
# Small LP helpers over block variables


def _pad(cols: dict, nvar: int, relation: str, rhs) -> Constraint:
    coeffs = [ZERO] * nvar
    for j, c in cols.items():
        coeffs[j] += c
    return Constraint(tuple(coeffs), relation, Q(rhs))


def _pair_rows(rows, nvar: int, first: Sequence, second: Sequence,
               homogeneous: bool) -> list:
    """Rows of K (or rec K) evaluated at a symbolic pair.

    `first`/`second` give, per ambient coordinate, (constant, {var: coeff})
    describing an affine expression in the LP variables.
    """
    out = []
    d = len(first)
    for r in rows:
        cols: dict = {}
        const = ZERO
        for j, c in enumerate(r.coeffs):
            if c == 0:
                continue
            base, lin = (first[j] if j < d else second[j - d])
            const += c * base
            for var, coef in lin.items():
                cols[var] = cols.get(var, ZERO) + c * coef
        rhs = (ZERO if homogeneous else r.rhs) - const
        out.append(_pad(cols, nvar, r.relation, rhs))
    return out


def _affine_const(u: Vec):
    return [(x, {}) for x in u]


def _affine_vars(offset: int, d: int):
    return [(ZERO, {offset + j: ONE}) for j in range(d)]


def _matrix_from_action(pairs, d: int) -> Optional[Mat]:
    """A d x d map sending each source to its image (rank-1 completion when
    only one independent pair is given)."""
    indep = []
    for src, img in pairs:
        if is_zero_vec(src):
            continue
        if not indep:
            indep.append((src, img))
        elif d == 2 and len(indep) == 1 and cross2(indep[0][0], src) != 0:
            indep.append((src, img))
    if not indep:
        return None
    if d == 1:
        src, img = indep[0]
        return mat([[img[0] / src[0]]])
    if len(indep) == 1:
        (src, img) = indep[0]
        nrm = dot(src, src)
        return mat([[img[i] * src[j] / nrm for j in range(2)]
                    for i in range(2)])
    (s1, i1), (s2, i2) = indep
    det = cross2(s1, s2)
    # columns of M in the basis (s1, s2): M = [i1 i2] * [s1 s2]^-1
    inv = ((s2[1] / det, -s2[0] / det), (-s1[1] / det, s1[0] / det))
    return mat([[i1[i] * inv[0][j] + i2[i] * inv[1][j] for j in range(2)]
                for i in range(2)])


def _cone_rows_at(cone: Cone2, nvar: int, expr) -> list:
    """Membership of an affine expression in a cone, as LP rows."""
    out = []
    for r in cone_to_hpoly(cone).rows:
        cols: dict = {}
        const = ZERO
        for j, c in enumerate(r.coeffs):
            if c == 0:
                continue
            base, lin = expr[j]
            const += c * base
            for var, coef in lin.items():
                cols[var] = cols.get(var, ZERO) + c * coef
        out.append(_pad(cols, nvar, r.relation, r.rhs - const))
    return out


def _seed_in_cone(rel: TransitionRelation, cone: Cone2):
    """(v, w) in K with w - v in the cone, or None."""
    d = rel.d
    nvar = 2 * d
    rows = list(rel.K.rows)
    expr = [(ZERO, {d + j: ONE, j: Q(-1)}) for j in range(d)]
    rows = [Constraint(r.coeffs, r.relation, r.rhs) for r in rows]
    rows += _cone_rows_at(cone, nvar, expr)
    res = lp_feasible(LPProblem(nvar, tuple(rows)))
    if isinstance(res, Feasible):
        return res.point[:d], res.point[d:]
    return None


def _generator_successors(rel: TransitionRelation, cone: Cone2):
    """For each generator g a successor s(g) with (g, s(g)) in rec(K) and
    s(g) in the cone; lineality vectors get odd successors (both signs)."""
    d = rel.d
    rec = recession_cone(rel.K)
    pairs = []
    for g in cone.generators:
        rows = _pair_rows(rec.rows, d, _affine_const(g), _affine_vars(0, d),
                          True)
        rows += _cone_rows_at(cone, d, _affine_vars(0, d))
        res = lp_feasible(LPProblem(d, tuple(rows)))
        if not isinstance(res, Feasible):
            return None
        pairs.append((g, res.point))
    for l in cone.lineality:
        rows = _pair_rows(rec.rows, d, _affine_const(l), _affine_vars(0, d),
                          True)
        rows += _pair_rows(rec.rows, d, _affine_const(neg(l)),
                           [(ZERO, {j: Q(-1)}) for j in range(d)], True)
        rows += _cone_rows_at(cone, d, _affine_vars(0, d))
        rows += _cone_rows_at(cone, d, [(ZERO, {j: Q(-1)}) for j in range(d)])
        res = lp_feasible(LPProblem(d, tuple(rows)))
        if not isinstance(res, Feasible):
            return None
        pairs.append((l, res.point))
    return pairs


# ---------------------------------------------------------------------------
# Direction candidates


def _zero_step_directions(rel: TransitionRelation) -> list:
    """Exact rays x with (0, x) in rec(K)."""
    d = rel.d
    rec = recession_cone(rel.K)
    rows = list(rec.rows)
    for j in range(d):
        coeffs = [ZERO] * (2 * d)
        coeffs[j] = ONE
        rows.append(Constraint(tuple(coeffs), EQ, ZERO))
    sliced = project(hpoly(2 * d, rows), list(range(d, 2 * d)))
    gen = h_to_v(sliced)
    out = [primitive(r) for r in gen.rays]
    for l in gen.lines:
        out.append(primitive(l))
        out.append(primitive(neg(l)))
    return [x for x in out if not is_zero_vec(x)]


def _estimate_dirs(est: DirectionEstimate) -> list:
    return [primitive(dirn) for dirn, _conf in est.directions]


def _perp(x: Vec) -> Vec:
    return (-x[1], x[0])


# ---------------------------------------------------------------------------
# Projected one-variable problems (cases 2 and 5)


def _projected_relation(rel: TransitionRelation, axis: Vec):
    """One-variable relation of the scores s = <u, axis> along a run."""
    d = rel.d
    nvar = 2 + 2 * d
    rows = [_pad({0: ONE, **{2 + j: -axis[j] for j in range(d)}}, nvar,
                 EQ, 0),
            _pad({1: ONE, **{2 + d + j: -axis[j] for j in range(d)}}, nvar,
                 EQ, 0)]
    for r in rel.K.rows:
        rows.append(_pad({2 + j: c for j, c in enumerate(r.coeffs) if c},
                         nvar, r.relation, r.rhs))
    K1 = project(hpoly(nvar, rows), [0, 1])
    return TransitionRelation(1, K1, ("s",))


def _lift_case2(rel: TransitionRelation, x: Vec) -> list:
    """Case-2 lift: (0, x) in rec(K); solve on x-perp and close the cone
    with the truncated chi family."""
    xp = _perp(x)
    sub_verdict = decide_1d(_projected_relation(rel, xp))
    if not isinstance(sub_verdict, NonTerminating):
        return []
    wit1 = sub_verdict.witness
    a = wit1.m[0][0]
    kind1 = wit1.cone.kind
    rec = recession_cone(rel.K)

    # A recession step (x, gamma*x + y) whose perp-score fits the 1-D cone.
    nvar = 2
    rows = _pair_rows(rec.rows, nvar, _affine_const(x), _affine_vars(0, 2),
                      True)
    score = {0: xp[0], 1: xp[1]}
    if kind1 == "zero":
        rows.append(_pad(score, nvar, EQ, 0))
    elif kind1 == "ray":
        sgn = ONE if wit1.cone.generators[0][0] > 0 else Q(-1)
        rows.append(_pad({k: sgn * v for k, v in score.items()}, nvar, GE, 0))
    res = lp_feasible(LPProblem(nvar, tuple(rows)))
    if not isinstance(res, Feasible):
        return []
    x_img = res.point
    gamma = dot(x_img, x) / dot(x, x)
    y = sub(x_img, scale(gamma, x))

    def bc_for(xi: Vec):
        """Lexicographically minimal-|.| (b, c) with
        (b x + xi, c x + a xi) in rec(K)."""
        def minimal_abs(build_rows, nv, col):
            best = None
            for sign in (ONE, Q(-1)):
                rows = build_rows()
                sel = {col: sign}
                rows.append(_pad(sel, nv, GE, 0))
                obj = [ZERO] * nv
                obj[col] = -sign
                res = lp_optimize(LPProblem(nv, tuple(rows), tuple(obj)))
                if isinstance(res, Optimal):
                    val = res.point[col]
                    key = (abs(val), -val)
                    if best is None or key < best[0]:
                        best = (key, val)
            return None if best is None else best[1]

        def rows_bc():
            first = [(xi[j], {0: x[j]}) for j in range(2)]
            second = [(a * xi[j], {1: x[j]}) for j in range(2)]
            return _pair_rows(rec.rows, 2, first, second, True)

        b = minimal_abs(rows_bc, 2, 0)
        if b is None:
            return None

        def rows_c():
            first = [(xi[j] + b * x[j], {}) for j in range(2)]
            second = [(a * xi[j], {0: x[j]}) for j in range(2)]
            return _pair_rows(rec.rows, 1, first, second, True)

        c = minimal_abs(rows_c, 1, 0)
        if c is None:
            return None
        return b, c

    abs_a = -a if a < 0 else a
    wv_vec = scale(wit1.w[0] - wit1.v[0], xp)
    gens = [vec(x)]
    for xi in (wv_vec, y):
        if is_zero_vec(xi):
            continue
        bc0 = bc_for(xi)
        bc1 = bc_for(scale(a, xi))
        if bc0 is None or bc1 is None:
            continue
        (b0, c0), (b1, c1) = bc0, bc1
        g0 = max(ONE, gamma, b0)
        g1 = max(abs_a, b1, c0)
        g2 = max(a * a, a * a * b0, c1)
        gens.append(add(scale(g0, x), xi))
        gens.append(add(scale(g1, x), scale(a, xi)))
        gens.append(add(scale(g2, x), scale(a * a, xi)))
    try:
        cone = cone_canonical(gens, dim=2)
    except Exception:
        return []
    pairs = _generator_successors(rel, cone)
    if pairs is None:
        return []
    m = _matrix_from_action(pairs, 2)
    if m is None:
        return []
    seed = _seed_in_cone(rel, cone)
    if seed is None:
        return []
    return [Witness(m, cone, seed[0], seed[1])]


def _lift_case5(rel: TransitionRelation, x: Vec) -> list:
    """Case-5 lift: directions span the line R x; solve on x-perp and
    adjoin the line to the cone."""
    xp = _perp(x)
    sub_verdict = decide_1d(_projected_relation(rel, xp))
    if not isinstance(sub_verdict, NonTerminating):
        return []
    wit1 = sub_verdict.witness
    mprime = wit1.m[0][0]
    rec = recession_cone(rel.K)

    # s(x) collinear with x, valid in both signs.
    rows = _pair_rows(rec.rows, 1, _affine_const(x),
                      [(ZERO, {0: x[j]}) for j in range(2)], True)
    rows += _pair_rows(rec.rows, 1, _affine_const(neg(x)),
                       [(ZERO, {0: -x[j]}) for j in range(2)], True)
    res = lp_feasible(LPProblem(1, tuple(rows)))
    if not isinstance(res, Feasible):
        return []
    sigma = res.point[0]

    gamma_scalar = wit1.w[0] - wit1.v[0]
    gvec = scale(gamma_scalar, xp)
    if is_zero_vec(gvec):
        cone = cone_canonical([], [x], dim=2)
        m = _matrix_from_action([(vec(x), scale(sigma, x))], 2)
        seed = _seed_in_cone(rel, cone)
        if m is None or seed is None:
            return []
        return [Witness(m, cone, seed[0], seed[1])]

    # (g1*x + G, g2*x + M'G) in rec(K)
    first = [(gvec[j], {0: x[j]}) for j in range(2)]
    second = [(mprime * gvec[j], {1: x[j]}) for j in range(2)]
    rows = _pair_rows(rec.rows, 2, first, second, True)
    res = lp_feasible(LPProblem(2, tuple(rows)))
    if not isinstance(res, Feasible):
        return []
    g1, g2 = res.point
    rays = [gvec]
    mg = scale(mprime, gvec)
    if not is_zero_vec(mg):
        rays.append(mg)
    try:
        cone = cone_canonical(rays, [x], dim=2)
    except Exception:
        return []
    mgamma = sub(add(scale(g2, x), scale(mprime, gvec)), scale(g1 * sigma, x))
    m = _matrix_from_action([(vec(x), scale(sigma, x)), (gvec, mgamma)], 2)
    if m is None:
        return []
    seed = _seed_in_cone(rel, cone)
    if seed is None:
        return []
    return [Witness(m, cone, seed[0], seed[1])]


# ---------------------------------------------------------------------------
# Cases 3 and 6


def _case3_candidates(rel: TransitionRelation,
                      dirs: Sequence[Vec]) -> list:
    if not dirs:
        return []
    out = []
    try:
        cone = cone_canonical(list(dirs), dim=2)
    except Exception:
        return []
    if cone.kind == "zero":
        return []
    pairs = _generator_successors(rel, cone)
    if pairs is None:
        return []
    m = _matrix_from_action(pairs, 2)
    if m is None:
        return []
    for x in dirs:
        first_step = _first_step_seed(rel, x)
        if first_step is not None:
            out.append(Witness(m, cone, first_step[0], first_step[1]))
            break
    if not out:
        seed = _seed_in_cone(rel, cone)
        if seed is not None:
            out.append(Witness(m, cone, seed[0], seed[1]))
    return out


def _first_step_seed(rel: TransitionRelation, x: Vec):
    """(p, p + mu*x) in K with mu > 0, preferring mu as large as feasible."""
    d = rel.d
    nvar = d + 1
    mu_col = d

    def rows_with(mu_min) -> list:
        first = _affine_vars(0, d)
        second = [(ZERO, {j: ONE, mu_col: x[j]}) for j in range(d)]
        rows = _pair_rows(rel.K.rows, nvar, first, second, False)
        rows.append(_pad({mu_col: ONE}, nvar, GE, mu_min))
        return rows

    rows = rows_with(ZERO)
    rows.append(_pad({mu_col: -ONE}, nvar, GE, -1))  # mu <= 1
    obj = [ZERO] * nvar
    obj[mu_col] = ONE
    res = lp_optimize(LPProblem(nvar, tuple(rows), tuple(obj)))
    if not isinstance(res, Optimal) or res.value <= 0:
        return None
    p = res.point[:d]
    mu = res.point[mu_col]
    return p, add(p, scale(mu, x))


def _slope_interval_along(rel: TransitionRelation, x: Vec):
    """{a : (x, a x) in rec(K)} as (empty, lower, upper), None = unbounded."""
    rec = recession_cone(rel.K)
    rows = _pair_rows(rec.rows, 1, _affine_const(x),
                      [(ZERO, {0: x[j]}) for j in range(len(x))], True)
    if not isinstance(lp_feasible(LPProblem(1, tuple(rows))), Feasible):
        return True, None, None
    hi = lp_optimize(LPProblem(1, tuple(rows), (ONE,)))
    lo = lp_optimize(LPProblem(1, tuple(rows), (-ONE,)))
    return (False,
            -lo.value if isinstance(lo, Optimal) else None,
            hi.value if isinstance(hi, Optimal) else None)


def _case6_candidates(rel: TransitionRelation, est: DirectionEstimate,
                      dirs: Sequence[Vec]) -> list:
    rec = recession_cone(rel.K)
    ratios = {primitive(dirn): ratio
              for (dirn, _c), ratio in zip(est.directions, est.growth_ratios)
              if ratio is not None}
    out = []
    for x in dirs:
        empty, lower, upper = _slope_interval_along(rel, x)
        if empty:
            continue
        a_candidates = []
        hint = ratios.get(primitive(x))
        for a in (hint, upper,
                  (max(lower or ZERO, ZERO) + 1) if upper is None else None,
                  lower):
            if a is None or a < 0:
                continue
            if lower is not None and a < lower:
                continue
            if upper is not None and a > upper:
                continue
            if a not in a_candidates:
                a_candidates.append(a)
        if not a_candidates:
            continue
        for y in (_perp(x), neg(_perp(x))):
            bcd = _solve_edge(rec, x, y)
            if bcd is None:
                continue
            b, c, dpar = bcd
            edge = add(scale(dpar, x), y)
            try:
                cone = cone_canonical([vec(x), edge], dim=2)
            except Exception:
                continue
            for a in a_candidates:
                m = _matrix_from_action(
                    [(vec(x), scale(a, x)),
                     (edge, add(scale(c, x), scale(b, y)))], 2)
                if m is None:
                    continue
                seed = _seed_in_cone(rel, cone)
                if seed is None:
                    break
                out.append(Witness(m, cone, seed[0], seed[1]))
    return out


def _solve_edge(rec: HPolyhedron, x: Vec, y: Vec):
    """(b, c, d) with (d x + y, c x + b y) in rec, b >= 0, c >= d b;
    d is enumerated so the remaining system is linear."""
    for dpar in (ZERO, ONE, Q(-1), Q(2), Q(-2), Q(3), Q(-3)):
        nvar = 2  # b, c
        first = [(dpar * x[j] + y[j], {}) for j in range(2)]
        second = [(ZERO, {1: x[j], 0: y[j]}) for j in range(2)]
        rows = _pair_rows(rec.rows, nvar, first, second, True)
        rows.append(_pad({0: ONE}, nvar, GE, 0))
        rows.append(_pad({1: ONE, 0: -dpar}, nvar, GE, 0))  # c - d b >= 0
        obj = (-dpar, ONE)  # prefer large c - d b
        res = lp_optimize(LPProblem(nvar, tuple(rows), obj))
        if isinstance(res, Optimal):
            return res.point[0], res.point[1], dpar
        if isinstance(res, Unbounded):
            feas = lp_feasible(LPProblem(nvar, tuple(rows)))
            if isinstance(feas, Feasible):
                return feas.point[0], feas.point[1], dpar
    return None


# ---------------------------------------------------------------------------
# Proposer front end


def propose_witnesses(rel: TransitionRelation,
                      est: DirectionEstimate) -> list:
    """Unverified witness candidates from all case templates, in a
    deterministic order; callers must verify each."""
    if rel.d != 2 or is_empty(rel.K):
        return []
    candidates = []
    fp = fixed_point_witness(rel)
    if fp.witness is not None:
        candidates.append(fp.witness)
    est_dirs = _estimate_dirs(est)
    zero_dirs = _zero_step_directions(rel)
    seen = set()
    case2_dirs = [x for x in zero_dirs + est_dirs
                  if not (x in seen or seen.add(x))]
    for x in case2_dirs:
        if x in zero_dirs or _zero_step_ok(rel, x):
            candidates.extend(_lift_case2(rel, x))
    candidates.extend(_case3_candidates(rel, est_dirs))
    for x in est_dirs:
        candidates.extend(_lift_case5(rel, x))
    candidates.extend(_case6_candidates(rel, est, est_dirs or zero_dirs))
    return candidates


def _zero_step_ok(rel: TransitionRelation, x: Vec) -> bool:
    rec = recession_cone(rel.K)
    point = zeros(rel.d) + tuple(x)
    return all(r.holds(point) for r in rec.rows)


# ---------------------------------------------------------------------------
# Orchestrator


def _starts(rel: TransitionRelation, cfg: Config) -> list:
    rng = random.Random(cfg.seed)
    starts = []
    base = feasible_point(rel.K)
    if base is not None:
        starts.append(base[:rel.d])
    while len(starts) < cfg.num_starts:
        cand = vec([rng.randint(-10, 10) for _ in range(rel.d)])
        starts.append(cand)
    return starts


def _merged_estimate(rel: TransitionRelation, cfg: Config) -> DirectionEstimate:
    merged = {}
    ratios = {}
    for start in _starts(rel, cfg):
        trace = greedy_run(rel, start, cfg.steps, Q(cfg.box_radius))
        est = estimate_directions(trace)
        for (dirn, conf), ratio in zip(est.directions, est.growth_ratios):
            if dirn not in merged or conf > merged[dirn]:
                merged[dirn] = conf
                ratios[dirn] = ratio
    order = sorted(merged, key=lambda dn: (-merged[dn], dn))
    return DirectionEstimate(tuple((dn, merged[dn]) for dn in order),
                             tuple(ratios[dn] for dn in order))


def _emit_nonterminating(rel: TransitionRelation, wit: Witness, method: str,
                         cfg: Config) -> Verdict:
    report = verify_witness(rel, wit)
    if not report.ok:
        raise InternalCheckError("unverified witness reached emission")
    trace = annotate_trace(rel, witness_to_run(wit, cfg.steps).points)
    if not check_run(rel, trace):
        raise InternalCheckError("witness run prefix failed exact recheck")
    return NonTerminating(wit, trace, method)


def _run_heuristics(rel: TransitionRelation, cfg: Config,
                    cancel=None) -> Optional[Verdict]:
    est = _merged_estimate(rel, cfg)
    for wit in propose_witnesses(rel, est):
        if cancel is not None and cancel.is_set():
            return None
        if verify_witness(rel, wit).ok:
            return _emit_nonterminating(rel, wit, HEURISTIC, cfg)
    return None


def _run_solver(rel: TransitionRelation, cfg: Config,
                cancel=None) -> Verdict:
    argv = cfg.resolved_solver()
    if argv is None:
        return Unknown("no witness found by heuristics and no SMT solver "
                       "is configured or installed")
    script = encode_witness_exists(rel)
    outcome = solve_external(script, argv, cfg.timeout_s, cancel)
    if outcome.status == "unsat":
        return Terminating(SOLVER_UNSAT, {
            "scriptSha256": script.content_hash,
            "solver": list(argv),
        })
    if outcome.status == "sat":
        wit = rationalize_and_verify(outcome, rel, cfg.denominator_bound)
        if wit is None:
            return Unknown("solver reported sat but its model failed exact "
                           "verification after rationalization")
        return NonTerminating(wit, RunTrace((), ()), SMT_MODEL)
    return Unknown(f"solver outcome: {outcome.status} {outcome.detail}".strip())


def decide(rel: TransitionRelation, cfg: Config = Config()) -> Verdict:
    """Full pipeline; sound in both directions, Unknown when honest."""
    if rel.d > 2:
        raise UnsupportedDimension("decision procedure covers d <= 2")
    if is_empty(rel.K):
        return Terminating(EMPTY_RELATION,
                           {"reason": "no admissible step pair exists"})
    fp = fixed_point_witness(rel)
    if fp.witness is not None:
        return _emit_nonterminating(rel, fp.witness, FIXED_POINT, cfg)
    if rel.d == 1:
        return decide_1d(rel)

    if not cfg.heuristics_enabled:
        return _run_solver(rel, cfg) if cfg.smt_enabled else Unknown(
            "both heuristics and SMT are disabled")
    if not cfg.smt_enabled:
        found = _run_heuristics(rel, cfg)
        return found if found is not None else Unknown(
            "heuristic proposers found no verifiable witness and SMT is "
            "disabled")

    if cfg.jobs > 1:
        cancel = threading.Event()
        with ThreadPoolExecutor(max_workers=1) as pool:
            solver_future = pool.submit(_run_solver, rel, cfg, cancel)
            found = _run_heuristics(rel, cfg, None)
            if found is not None:
                cancel.set()
                solver_future.cancel()
                return found
            return solver_future.result()
    found = _run_heuristics(rel, cfg)
    if found is not None:
        return found
    return _run_solver(rel, cfg)


def decide_witness_only(rel: TransitionRelation,
                        cfg: Config = Config()) -> Optional[Witness]:
    v = decide(rel, cfg)
    return v.witness if isinstance(v, NonTerminating) else None
