"""Loop source formats and the induced transition relation.

The textual DSL describes one loop per file:

    loop(x, y) {
      guard: x >= 0;
      step: x' == x + y; y' == y - 1;
    }

Primed names refer to post-step values and may appear only in the step
section.  Relations are ==, >= and <= (strict comparisons are rejected:
the analysis covers non-strict systems only).  Coefficients are integer,
fraction ("p/q") or finite-decimal literals, all converted exactly.
`#` starts a comment running to the end of the line.

A raw-matrix JSON form {"d": .., "B": [[..]], "b": [..], "A": [[..]],
"a": [..]} is accepted interchangeably, with rationals as "p/q" strings;
its rows all read coeffs . vars >= rhs.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import (LoopParseError, StrictInequalityUnsupported,
                     UnsupportedDimension)
from .linalg import Vec, vec, zeros
from .lp import EQ, GE, Constraint
from .polyhedra import HPolyhedron, hpoly
from .qnum import ONE, Q, QNum, ZERO, qstr

MAX_DIM = 2


@dataclass(frozen=True)
class ConstraintLoop:
    """Parsed loop: guard rows over x, body rows over (x, x')."""

    var_names: tuple
    guard_rows: tuple  # Constraint, width d
    body_rows: tuple   # Constraint, width 2d

    @property
    def d(self) -> int:
        return len(self.var_names)

    def inequality_form(self):
        """(B, b, A, a) with every row as >= (equalities split in two)."""
        def split(rows):
            out = []
            for r in rows:
                out.append((r.coeffs, r.rhs))
                if r.relation == EQ:
                    out.append((tuple(-c for c in r.coeffs), -r.rhs))
            return out

        guard = split(self.guard_rows)
        body = split(self.body_rows)
        return ([list(c) for c, _ in guard], [rhs for _, rhs in guard],
                [list(c) for c, _ in body], [rhs for _, rhs in body])


@dataclass(frozen=True)
class TransitionRelation:
    """K in R^(2d): admissible (x, x') pairs with the guard folded in."""

    d: int
    K: HPolyhedron
    var_names: tuple

    def member(self, x: Vec, x_next: Vec) -> bool:
        return self.K.member(tuple(x) + tuple(x_next))


# ---------------------------------------------------------------------------
# Lexer


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*'?)
  | (?P<op>==|>=|<=|>|<|=)
  | (?P<punct>[(){},;:+\-*/])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str):
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LoopParseError(f"unexpected character {text[pos]!r}",
                                 line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(lexeme)
        else:
            toks.append(_Tok(kind, lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise LoopParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}",
                      t)
        return t

    # expression -> {var: coeff}, constant
    def linear_expr(self):
        coeffs: dict = {}
        const = ZERO
        first = True
        while True:
            sign = ONE
            saw_sign = False
            while self.peek().text in ("+", "-"):
                if self.next().text == "-":
                    sign = -sign
                saw_sign = True
            if not first and not saw_sign:
                break
            c, var = self.term()
            if var is None:
                const += sign * c
            else:
                coeffs[var] = coeffs.get(var, ZERO) + sign * c
            first = False
        return coeffs, const

    def term(self):
        t = self.next()
        if t.kind == "num":
            value = Q(t.text)
            if self.peek().text == "/":
                self.next()
                den = self.next()
                if den.kind != "num":
                    self.fail("expected denominator after '/'", den)
                value = value / Q(den.text)
            if self.peek().text == "*":
                self.next()
                name = self.next()
                if name.kind != "ident":
                    self.fail("expected variable after '*'", name)
                return value, name.text
            if self.peek().kind == "ident":
                return value, self.next().text
            return value, None
        if t.kind == "ident":
            return ONE, t.text
        self.fail("expected a number or variable", t)

    def constraint(self) -> tuple:
        lhs_coeffs, lhs_const = self.linear_expr()
        op = self.next()
        if op.text in ("<", ">"):
            raise StrictInequalityUnsupported(
                "strict inequalities are not supported (use >= or <=)",
                op.line, op.col)
        if op.text == "=":
            self.fail("use '==' for equations", op)
        if op.text not in ("==", ">=", "<="):
            self.fail(f"expected a relation, found {op.text!r}", op)
        rhs_coeffs, rhs_const = self.linear_expr()
        coeffs = dict(lhs_coeffs)
        for v, c in rhs_coeffs.items():
            coeffs[v] = coeffs.get(v, ZERO) - c
        rhs = rhs_const - lhs_const
        if op.text == "<=":
            coeffs = {v: -c for v, c in coeffs.items()}
            rhs = -rhs
            relation = GE
        else:
            relation = EQ if op.text == "==" else GE
        return coeffs, relation, rhs, op


def _dsl_parse(text: str) -> ConstraintLoop:
    p = _Parser(_lex(text))
    kw = p.next()
    if kw.text != "loop":
        p.fail("loop file must start with 'loop(<vars>)'", kw)
    p.expect("(")
    names = []
    while True:
        t = p.next()
        if t.kind != "ident" or t.text.endswith("'"):
            p.fail("expected a variable name", t)
        if t.text in names:
            p.fail(f"duplicate variable {t.text!r}", t)
        names.append(t.text)
        t = p.next()
        if t.text == ")":
            break
        if t.text != ",":
            p.fail("expected ',' or ')' in the variable list", t)
    if len(names) > MAX_DIM:
        raise UnsupportedDimension(
            f"{len(names)} variables; the analysis supports at most {MAX_DIM}")
    p.expect("{")
    p.expect("guard")
    p.expect(":")
    guard, body = [], []
    section = guard
    in_step = False
    while True:
        t = p.peek()
        if t.text == "}":
            p.next()
            break
        if t.text == "step" and not in_step:
            p.next()
            p.expect(":")
            section = body
            in_step = True
            continue
        if t.kind == "eof":
            p.fail("unterminated loop body", t)
        coeffs, relation, rhs, op = p.constraint()
        section.append((coeffs, relation, rhs, op))
        if p.peek().text == ";":
            p.next()
    if not in_step:
        p.fail("missing 'step:' section")
    return _assemble(names, guard, body)


def _assemble(names, guard_raw, body_raw) -> ConstraintLoop:
    d = len(names)
    index = {n: i for i, n in enumerate(names)}
    for i, n in enumerate(names):
        index[n + "'"] = d + i
    guard_rows, body_rows = [], []
    for coeffs, relation, rhs, op in guard_raw:
        row = [ZERO] * d
        for var, c in coeffs.items():
            if var.endswith("'"):
                raise LoopParseError(
                    f"primed variable {var!r} is not allowed in the guard",
                    op.line, op.col)
            if var not in index:
                raise LoopParseError(f"undeclared variable {var!r}",
                                     op.line, op.col)
            row[index[var]] = c
        guard_rows.append(Constraint(vec(row), relation, rhs))
    for coeffs, relation, rhs, op in body_raw:
        row = [ZERO] * (2 * d)
        for var, c in coeffs.items():
            if var not in index:
                raise LoopParseError(f"undeclared variable {var!r}",
                                     op.line, op.col)
            row[index[var]] = c
        body_rows.append(Constraint(vec(row), relation, rhs))
    return ConstraintLoop(tuple(names), tuple(guard_rows), tuple(body_rows))


# ---------------------------------------------------------------------------
# JSON matrix form


def _json_parse(text: str) -> ConstraintLoop:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoopParseError(f"invalid JSON loop: {e.msg}", e.lineno, e.colno)
    try:
        d = int(payload["d"])
        B = [[Q(str(x)) for x in row] for row in payload["B"]]
        b = [Q(str(x)) for x in payload["b"]]
        A = [[Q(str(x)) for x in row] for row in payload["A"]]
        a = [Q(str(x)) for x in payload["a"]]
    except (KeyError, TypeError, ValueError) as e:
        raise LoopParseError(f"malformed matrix loop: {e}")
    if d < 1:
        raise LoopParseError("dimension must be at least 1")
    if d > MAX_DIM:
        raise UnsupportedDimension(
            f"{d} variables; the analysis supports at most {MAX_DIM}")
    if len(B) != len(b) or len(A) != len(a):
        raise LoopParseError("matrix and vector row counts disagree")
    names = tuple("xyzw"[:d])
    guard_rows = []
    for row, rhs in zip(B, b):
        if len(row) != d:
            raise LoopParseError("guard row width must equal d")
        guard_rows.append(Constraint(vec(row), GE, rhs))
    body_rows = []
    for row, rhs in zip(A, a):
        if len(row) != 2 * d:
            raise LoopParseError("body row width must equal 2d")
        body_rows.append(Constraint(vec(row), GE, rhs))
    return ConstraintLoop(names, tuple(guard_rows), tuple(body_rows))


def parse_loop(text: str) -> ConstraintLoop:
    """Parse DSL or raw-matrix JSON (detected by a leading '{')."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _json_parse(text)
    return _dsl_parse(text)


# ---------------------------------------------------------------------------
# Pretty-printing (parse -> print -> parse is a fixpoint)


def _render_expr(coeffs, names) -> str:
    parts = []
    for name, c in zip(names, coeffs):
        if c == 0:
            continue
        mag = -c if c < 0 else c
        term = name if mag == 1 else f"{qstr(mag)}*{name}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    if not parts:
        return "0"
    return " ".join(parts)


def pretty_print(loop: ConstraintLoop) -> str:
    d = loop.d
    names = list(loop.var_names)
    primed = [n + "'" for n in names]
    lines = [f"loop({', '.join(names)}) {{"]
    guard = "; ".join(
        f"{_render_expr(r.coeffs, names)} {'==' if r.relation == EQ else '>='}"
        f" {qstr(r.rhs)}" for r in loop.guard_rows)
    lines.append(f"  guard: {guard}{';' if guard else ''}")
    body = "; ".join(
        f"{_render_expr(r.coeffs, names + primed)} "
        f"{'==' if r.relation == EQ else '>='} {qstr(r.rhs)}"
        for r in loop.body_rows)
    lines.append(f"  step: {body}{';' if body else ''}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loop_hash(loop: ConstraintLoop) -> str:
    return hashlib.sha256(pretty_print(loop).encode()).hexdigest()


def loop_to_relation(loop: ConstraintLoop) -> TransitionRelation:
    """Stack the guard (zero-padded on x') on top of the body rows."""
    d = loop.d
    rows = [Constraint(tuple(r.coeffs) + zeros(d), r.relation, r.rhs)
            for r in loop.guard_rows]
    rows.extend(loop.body_rows)
    return TransitionRelation(d, hpoly(2 * d, rows), loop.var_names)
