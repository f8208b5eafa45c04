"""Existential real-arithmetic encoding of witness existence.

The emitted script is plain SMT-LIB 2 over QF_NRA with deterministic
variable naming (m11.., g1x.., vx.., lam_*), so scripts are diffable and
cacheable by content hash.  The same constraint objects that render to
SMT text also evaluate under exact rational assignments; that internal
evaluator is what the encoding-faithfulness tests drive, so the text and
the checked semantics cannot drift apart.

Solver models are never trusted: values are rationalized (exact literals
pass through, decimals go through continued-fraction approximation) and
the resulting witness must survive exact verification before anything
downstream sees it.
"""

from __future__ import annotations

import hashlib
import re
import subprocess
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .certificates import Witness, verify_witness
from .cones import (HALF_PLANE, LINE, PLANE, RAY, SECTOR, ZERO_CONE, Cone2,
                    cone_canonical, zero_cone)
from .errors import PreconditionError, UnsupportedDimension
from .linalg import Vec, cross2, is_zero_vec, mat, matvec, maxabs, vec
from .loops import TransitionRelation
from .qnum import ONE, Q, QNum, ZERO, limit_denominator, qstr

DEFAULT_DENOMINATOR_BOUND = 10 ** 6

# ---------------------------------------------------------------------------
# Terms and formulas


class Term:
    def __add__(self, other):
        return Add((self, _term(other)))

    def __mul__(self, other):
        return Mul(self, _term(other))

    def __neg__(self):
        return Mul(Const(Q(-1)), self)

    def __sub__(self, other):
        return Add((self, -_term(other)))


def _term(x) -> Term:
    return x if isinstance(x, Term) else Const(Q(x))


@dataclass(frozen=True)
class Const(Term):
    value: QNum

    def smt(self) -> str:
        v = self.value
        if v < 0:
            return f"(- {_smt_positive(-v)})"
        return _smt_positive(v)

    def eval(self, env) -> QNum:
        return self.value


def _smt_positive(v) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"(/ {v.numerator} {v.denominator})"


@dataclass(frozen=True)
class Var(Term):
    name: str

    def smt(self) -> str:
        return self.name

    def eval(self, env) -> QNum:
        return env[self.name]


@dataclass(frozen=True)
class Add(Term):
    terms: tuple

    def smt(self) -> str:
        return f"(+ {' '.join(t.smt() for t in self.terms)})"

    def eval(self, env) -> QNum:
        total = ZERO
        for t in self.terms:
            total += t.eval(env)
        return total


@dataclass(frozen=True)
class Mul(Term):
    a: Term
    b: Term

    def smt(self) -> str:
        return f"(* {self.a.smt()} {self.b.smt()})"

    def eval(self, env) -> QNum:
        return self.a.eval(env) * self.b.eval(env)


class Formula:
    pass


@dataclass(frozen=True)
class Cmp(Formula):
    op: str  # ">=", "=", "<="
    lhs: Term
    rhs: Term

    def smt(self) -> str:
        return f"({self.op} {self.lhs.smt()} {self.rhs.smt()})"

    def eval(self, env) -> bool:
        a, b = self.lhs.eval(env), self.rhs.eval(env)
        if self.op == ">=":
            return a >= b
        if self.op == "<=":
            return a <= b
        return a == b


@dataclass(frozen=True)
class BoolVar(Formula):
    name: str

    def smt(self) -> str:
        return self.name

    def eval(self, env) -> bool:
        return bool(env[self.name])


@dataclass(frozen=True)
class Not(Formula):
    f: Formula

    def smt(self) -> str:
        return f"(not {self.f.smt()})"

    def eval(self, env) -> bool:
        return not self.f.eval(env)


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def smt(self) -> str:
        if not self.parts:
            return "true"
        return f"(and {' '.join(p.smt() for p in self.parts)})"

    def eval(self, env) -> bool:
        return all(p.eval(env) for p in self.parts)


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def smt(self) -> str:
        if not self.parts:
            return "false"
        return f"(or {' '.join(p.smt() for p in self.parts)})"

    def eval(self, env) -> bool:
        return any(p.eval(env) for p in self.parts)


@dataclass(frozen=True)
class Implies(Formula):
    a: Formula
    b: Formula

    def smt(self) -> str:
        return f"(=> {self.a.smt()} {self.b.smt()})"

    def eval(self, env) -> bool:
        return (not self.a.eval(env)) or self.b.eval(env)


# ---------------------------------------------------------------------------
# Script


@dataclass(frozen=True)
class SMTScript:
    d: int
    real_vars: tuple
    bool_vars: tuple
    assertions: tuple
    shapes: tuple  # cone kinds in selector order

    @property
    def text(self) -> str:
        lines = ["(set-option :produce-models true)", "(set-logic QF_NRA)"]
        for name in self.bool_vars:
            lines.append(f"(declare-const {name} Bool)")
        for name in self.real_vars:
            lines.append(f"(declare-const {name} Real)")
        for a in self.assertions:
            lines.append(f"(assert {a.smt()})")
        lines.append("(check-sat)")
        lines.append("(get-model)")
        return "\n".join(lines) + "\n"

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def evaluate(self, env: dict) -> bool:
        """Exact satisfaction check of all assertions under env."""
        return all(a.eval(env) for a in self.assertions)


def _shape_names(d: int) -> tuple:
    if d == 1:
        return (ZERO_CONE, RAY, LINE)
    return (ZERO_CONE, RAY, LINE, SECTOR, HALF_PLANE, PLANE)


_COORDS = ("x", "y")


def encode_witness_exists(rel: TransitionRelation) -> SMTScript:
    """Quantifier-free script satisfiable iff the relation has a witness.

    Unknowns: the d*d map, up to two cone vectors with shape selectors,
    the seed pair, and nonnegative combination multipliers for the cone
    memberships required by the closure and first-step conditions.
    """
    d = rel.d
    if d not in (1, 2):
        raise UnsupportedDimension("witness encoding needs dimension 1 or 2")
    coords = _COORDS[:d]
    m_names = [[f"m{i + 1}{j + 1}" for j in range(d)] for i in range(d)]
    g_names = [[f"g{k + 1}{c}" for c in coords]
               for k in range(2 if d == 2 else 1)]
    v_names = [f"v{c}" for c in coords]
    w_names = [f"w{c}" for c in coords]

    real_vars = [n for row in m_names for n in row]
    real_vars += [n for g in g_names for n in g]
    real_vars += v_names + w_names

    shapes = _shape_names(d)
    bool_vars = [f"shape_{s}" for s in shapes]
    selector = {s: BoolVar(f"shape_{s}") for s in shapes}

    M = [[Var(n) for n in row] for row in m_names]
    G = [tuple(Var(n) for n in g) for g in g_names]
    V = tuple(Var(n) for n in v_names)
    W = tuple(Var(n) for n in w_names)

    def mul_vec(mx, u: Sequence[Term]) -> tuple:
        return tuple(Add(tuple(mx[i][j] * u[j] for j in range(d)))
                     for i in range(d))

    def combo(target: Sequence[Term], prefix: str, signs: Sequence):
        """target == sum lam_k * G_k; signs[k] is "nonneg", "free" or None
        (generator unused).  Returns (constraints, new real var names)."""
        names = []
        parts = []
        terms_per_coord = [[] for _ in range(d)]
        for k, sign in enumerate(signs):
            if sign is None:
                continue
            lam = Var(f"lam_{prefix}_{k + 1}")
            names.append(lam.name)
            if sign == "nonneg":
                parts.append(Cmp(">=", lam, Const(ZERO)))
            for i in range(d):
                terms_per_coord[i].append(lam * G[k][i])
        for i in range(d):
            rhs = Add(tuple(terms_per_coord[i])) if terms_per_coord[i] \
                else Const(ZERO)
            parts.append(Cmp("=", target[i], rhs))
        return parts, names

    def rows_at(pair: Sequence[Term], homogeneous: bool) -> list:
        out = []
        for r in rel.K.rows:
            lhs = Add(tuple(Const(c) * pair[j]
                            for j, c in enumerate(r.coeffs) if c != 0)
                      or (Const(ZERO),))
            rhs = Const(ZERO if homogeneous else r.rhs)
            out.append(Cmp("=" if r.relation == "==" else ">=", lhs, rhs))
        return out

    def normalized(g: tuple) -> list:
        parts = [Or(tuple(Cmp("=", gi, Const(s))
                          for gi in g for s in (ONE, Q(-1))))]
        for gi in g:
            parts.append(Cmp("<=", gi, Const(ONE)))
            parts.append(Cmp(">=", gi, Const(Q(-1))))
        return parts

    def independent(a: tuple, b: tuple) -> Formula:
        if d == 1:
            return Or(())  # impossible in dimension 1
        cross = a[0] * b[1] - a[1] * b[0]
        return Not(Cmp("=", cross, Const(ZERO)))

    neg_g = [tuple(Const(Q(-1)) * gi for gi in g) for g in G]
    mg = [mul_vec(M, g) for g in G]
    neg_mg = [tuple(Const(Q(-1)) * t for t in v) for v in mg]
    wv = tuple(W[i] - V[i] for i in range(d))

    assertions = [Or(tuple(selector[s] for s in shapes))]
    at_most = []
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            at_most.append(Or((Not(selector[shapes[i]]),
                               Not(selector[shapes[j]]))))
    assertions.extend(at_most)
    assertions.extend(rows_at(V + W, homogeneous=False))  # seed pair in K

    lam_names = []

    def shape_case(kind: str, parts: list) -> None:
        assertions.append(Implies(selector[kind], And(tuple(parts))))

    # zero cone: w == v, nothing else
    shape_case(ZERO_CONE,
               [Cmp("=", W[i], V[i]) for i in range(d)])

    # ray: C = R+ g1
    parts = normalized(G[0])
    parts += rows_at(G[0] + mg[0], True)
    for target, tag in ((mg[0], "mg1"), (wv, "wv")):
        cs, names = combo(target, f"ray_{tag}", ["nonneg", None])
        parts += cs
        lam_names += names
    shape_case(RAY, parts)

    # line: C = R g1
    parts = normalized(G[0])
    parts += rows_at(G[0] + mg[0], True)
    parts += rows_at(neg_g[0] + neg_mg[0], True)
    for target, tag in ((mg[0], "mg1"), (wv, "wv")):
        cs, names = combo(target, f"line_{tag}", ["free", None])
        parts += cs
        lam_names += names
    shape_case(LINE, parts)

    if d == 2:
        # sector: C = R+ g1 + R+ g2, independent generators
        parts = normalized(G[0]) + normalized(G[1])
        parts.append(independent(G[0], G[1]))
        parts += rows_at(G[0] + mg[0], True)
        parts += rows_at(G[1] + mg[1], True)
        for target, tag in ((mg[0], "mg1"), (mg[1], "mg2"), (wv, "wv")):
            cs, names = combo(target, f"sector_{tag}", ["nonneg", "nonneg"])
            parts += cs
            lam_names += names
        shape_case(SECTOR, parts)

        # halfplane: C = R g1 + R+ g2
        parts = normalized(G[0]) + normalized(G[1])
        parts.append(independent(G[0], G[1]))
        parts += rows_at(G[0] + mg[0], True)
        parts += rows_at(neg_g[0] + neg_mg[0], True)
        parts += rows_at(G[1] + mg[1], True)
        for target, tag in ((mg[0], "mg1"), (neg_mg[0], "mg1n"),
                            (mg[1], "mg2"), (wv, "wv")):
            cs, names = combo(target, f"halfplane_{tag}", ["free", "nonneg"])
            parts += cs
            lam_names += names
        shape_case(HALF_PLANE, parts)

        # plane: C = R^2; memberships are vacuous
        parts = normalized(G[0]) + normalized(G[1])
        parts.append(independent(G[0], G[1]))
        for g, ng, img, nimg in ((G[0], neg_g[0], mg[0], neg_mg[0]),
                                 (G[1], neg_g[1], mg[1], neg_mg[1])):
            parts += rows_at(g + img, True)
            parts += rows_at(ng + nimg, True)
        shape_case(PLANE, parts)

    return SMTScript(d, tuple(real_vars + lam_names), tuple(bool_vars),
                     tuple(assertions), shapes)

# ---------------------------------------------------------------------------
# External solver client


@dataclass(frozen=True)
class SolverOutcome:
    status: str  # "sat" | "unsat" | "unknown" | "timeout" | "toolerror"
    model: Optional[dict] = None  # raw variable -> value string/bool
    detail: str = ""


def solve_external(script: SMTScript, argv: Sequence[str],
                   timeout_s: float, cancel=None) -> SolverOutcome:
    """Run the script through `argv` on stdin with a wall-clock budget.

    Never raises on solver misbehaviour: missing binaries, crashes and
    unparseable output all map to ToolError outcomes; `cancel` (an object
    with is_set()) aborts early, reporting a timeout.
    """
    try:
        proc = subprocess.Popen(list(argv), stdin=subprocess.PIPE,
                                stdout=subprocess.PIPE,
                                stderr=subprocess.PIPE, text=True)
    except (OSError, ValueError) as e:
        return SolverOutcome("toolerror", detail=f"cannot launch solver: {e}")
    try:
        proc.stdin.write(script.text)
        proc.stdin.close()
    except (BrokenPipeError, OSError):
        pass
    deadline = time.monotonic() + timeout_s
    while proc.poll() is None:
        if cancel is not None and cancel.is_set():
            proc.kill()
            proc.wait()
            return SolverOutcome("timeout", detail="cancelled")
        if time.monotonic() >= deadline:
            proc.kill()
            proc.wait()
            return SolverOutcome("timeout",
                                 detail=f"budget of {timeout_s}s exhausted")
        time.sleep(0.02)
    out = proc.stdout.read() if proc.stdout else ""
    err = proc.stderr.read() if proc.stderr else ""
    first = next((l.strip() for l in out.splitlines() if l.strip()), "")
    if first == "unsat":
        return SolverOutcome("unsat")
    if first == "unknown":
        return SolverOutcome("unknown", detail=err.strip())
    if first == "sat":
        try:
            model = _parse_model(out)
        except ValueError as e:
            return SolverOutcome("toolerror",
                                 detail=f"unparseable model: {e}; {err.strip()}")
        return SolverOutcome("sat", model=model)
    return SolverOutcome("toolerror",
                         detail=f"unrecognized output {first!r}; {err.strip()}")


def _sexp_tokens(text: str):
    return re.findall(r"\(|\)|[^\s()]+", text)


def _read_sexp(tokens, i):
    if tokens[i] != "(":
        return tokens[i], i + 1
    out = []
    i += 1
    while i < len(tokens) and tokens[i] != ")":
        node, i = _read_sexp(tokens, i)
        out.append(node)
    if i >= len(tokens):
        raise ValueError("unbalanced parentheses")
    return out, i + 1


def _parse_model(out: str) -> dict:
    body = out[out.index("sat") + 3:]
    tokens = _sexp_tokens(body)
    model = {}
    i = 0
    while i < len(tokens):
        if tokens[i] != "(":
            i += 1
            continue
        node, i = _read_sexp(tokens, i)
        stack = [node]
        while stack:
            cur = stack.pop()
            if (isinstance(cur, list) and len(cur) >= 5
                    and cur[0] == "define-fun"):
                model[cur[1]] = cur[4]
            elif isinstance(cur, list):
                stack.extend(x for x in cur if isinstance(x, list))
    return model


def _value_to_rational(node) -> QNum:
    """Exact conversion of a model value s-expression."""
    if isinstance(node, str):
        return Q(node)
    if isinstance(node, list):
        if node and node[0] == "-" and len(node) == 2:
            return -_value_to_rational(node[1])
        if node and node[0] == "/" and len(node) == 3:
            return _value_to_rational(node[1]) / _value_to_rational(node[2])
    raise ValueError(f"unsupported model value {node!r}")


def _model_rational(model: dict, name: str, bound: int) -> QNum:
    node = model.get(name, "0")
    exact = isinstance(node, list) or "." not in str(node)
    value = _value_to_rational(node)
    return value if exact else limit_denominator(value, bound)


def _model_bool(model: dict, name: str) -> bool:
    return str(model.get(name, "false")) == "true"


def _cone_from_model(script: SMTScript, get) -> Optional[Cone2]:
    d = script.d
    coords = _COORDS[:d]
    g1 = vec([get(f"g1{c}") for c in coords])
    g2 = vec([get(f"g2{c}") for c in coords]) if d == 2 else None
    kind = next((s for s in script.shapes if get(f"shape_{s}")), None)
    try:
        if kind == ZERO_CONE:
            return zero_cone(d)
        if kind == RAY:
            return cone_canonical([g1], dim=d)
        if kind == LINE:
            return cone_canonical([], [g1], dim=d)
        if kind == SECTOR:
            return cone_canonical([g1, g2], dim=d)
        if kind == HALF_PLANE:
            return cone_canonical([g2], [g1], dim=d)
        if kind == PLANE:
            return cone_canonical([], [g1, g2], dim=d)
    except PreconditionError:
        return None
    return None


def rationalize_and_verify(outcome: SolverOutcome, rel: TransitionRelation,
                           denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
                           ) -> Optional[Witness]:
    """Exact witness from a sat model, or None.

    Decimal model values are rationalized with the configured denominator
    bound, retried once with a 1000x larger bound; a model that never
    passes exact verification is discarded (the decider then reports
    Unknown rather than trusting the solver).
    """
    if outcome.status != "sat" or outcome.model is None:
        raise PreconditionError("rationalization needs a sat outcome")
    script = encode_witness_exists(rel)
    for bound in (denominator_bound, denominator_bound * 1000):
        model = outcome.model

        def get(name: str):
            if name.startswith("shape_"):
                return _model_bool(model, name)
            return _model_rational(model, name, bound)

        d = rel.d
        coords = _COORDS[:d]
        try:
            m = mat([[get(f"m{i + 1}{j + 1}") for j in range(d)]
                     for i in range(d)])
            v = vec([get(f"v{c}") for c in coords])
            w = vec([get(f"w{c}") for c in coords])
        except ValueError:
            return None
        cone = _cone_from_model(script, get)
        if cone is None:
            continue
        wit = Witness(m, cone, v, w)
        if verify_witness(rel, wit).ok:
            return wit
    return None


# ---------------------------------------------------------------------------
# Internal faithfulness check support


def witness_assignment(script: SMTScript, wit: Witness) -> Optional[dict]:
    """An exact assignment for the script's variables realizing a witness.

    Used to check that the emitted constraints accept every exactly
    verified witness (the small-model direction of encoding correctness).
    Returns None when the witness's cone shape cannot be expressed (never
    expected for canonical cones).
    """
    d = script.d
    coords = _COORDS[:d]
    kind = wit.cone.kind
    env = {name: ZERO for name in script.real_vars}
    for s in script.shapes:
        env[f"shape_{s}"] = (s == kind)

    def put_vec(prefix: str, u) -> None:
        for c, x in zip(coords, u):
            env[f"{prefix}{c}"] = x

    def norm(u):
        m = maxabs(u)
        return tuple(x / m for x in u)

    if kind == ZERO_CONE:
        g = [None, None]
    elif kind == RAY:
        g = [norm(wit.cone.generators[0]), None]
    elif kind == LINE:
        g = [norm(wit.cone.lineality[0]), None]
    elif kind == SECTOR:
        g = [norm(wit.cone.generators[0]), norm(wit.cone.generators[1])]
    elif kind == HALF_PLANE:
        g = [norm(wit.cone.lineality[0]), norm(wit.cone.generators[0])]
    else:  # plane
        g = [norm(wit.cone.lineality[0]), norm(wit.cone.lineality[1])]
    if g[0] is not None:
        put_vec("g1", g[0])
    if g[1] is not None:
        put_vec("g2", g[1])
    for i in range(d):
        for j in range(d):
            env[f"m{i + 1}{j + 1}"] = wit.m[i][j]
    put_vec("v", wit.v)
    put_vec("w", wit.w)

    def multipliers(target, tag: str) -> bool:
        used = [k for k in (0, 1) if g[k] is not None]
        if not used:
            return is_zero_vec(target)
        names = [f"lam_{kind}_{tag}_{k + 1}" for k in used]
        if len(used) == 1:
            base = g[used[0]]
            k = next(i for i, x in enumerate(base) if x != 0)
            lam = target[k] / base[k]
            if any(target[i] != lam * base[i] for i in range(d)):
                return False
            env[names[0]] = lam
            return True
        det = cross2(g[0], g[1])
        if det == 0:
            return False
        env[names[0]] = cross2(target, g[1]) / det
        env[names[1]] = cross2(g[0], target) / det
        return True

    wv = tuple(b - a for a, b in zip(wit.v, wit.w))
    ok = True
    if kind in (RAY, LINE):
        ok &= multipliers(matvec(wit.m, g[0]), "mg1")
        ok &= multipliers(wv, "wv")
    elif kind == SECTOR:
        ok &= multipliers(matvec(wit.m, g[0]), "mg1")
        ok &= multipliers(matvec(wit.m, g[1]), "mg2")
        ok &= multipliers(wv, "wv")
    elif kind == HALF_PLANE:
        img1 = matvec(wit.m, g[0])
        ok &= multipliers(img1, "mg1")
        ok &= multipliers(tuple(-x for x in img1), "mg1n")
        ok &= multipliers(matvec(wit.m, g[1]), "mg2")
        ok &= multipliers(wv, "wv")
    return env if ok else None
