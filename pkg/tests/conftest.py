"""Shared fixtures: the golden loop corpus and random-geometry helpers."""

from __future__ import annotations

import random

import pytest

from loopwitness.loops import loop_to_relation, parse_loop
from loopwitness.lp import Constraint, EQ, GE, Feasible, LPProblem, lp_feasible
from loopwitness.polyhedra import HPolyhedron, hpoly
from loopwitness.qnum import Q

GOLDEN_SOURCES = {
    "L1": "loop(x) { guard: x >= 0; step: x' == x + 1; }",
    "L2": "loop(x) { guard: x >= 0; step: x' == x - 1; }",
    "L3": "loop(x) { guard: x >= 1; step: x' == 2*x; }",
    "L4": "loop(x,y) { guard: x >= 0; step: x' == x + y; y' == y; }",
    "L5": "loop(x,y) { guard: x >= 0; step: x' == x + y; y' == y - 1; }",
}


@pytest.fixture(scope="session")
def golden_loops():
    return {name: parse_loop(src) for name, src in GOLDEN_SOURCES.items()}


@pytest.fixture(scope="session")
def golden_relations(golden_loops):
    return {name: loop_to_relation(loop)
            for name, loop in golden_loops.items()}


def random_hpoly(rng: random.Random, n: int, max_rows: int = 8,
                 coeff_bound: int = 3, require_nonempty: bool = True,
                 eq_share: float = 0.15) -> HPolyhedron:
    """Random small H-polyhedron, resampled until non-empty if asked."""
    while True:
        rows = []
        for _ in range(rng.randint(1, max_rows)):
            coeffs = [Q(rng.randint(-coeff_bound, coeff_bound))
                      for _ in range(n)]
            if all(c == 0 for c in coeffs):
                continue
            relation = EQ if rng.random() < eq_share else GE
            rows.append(Constraint(tuple(coeffs), relation,
                                   Q(rng.randint(-coeff_bound, coeff_bound))))
        h = hpoly(n, rows)
        if not require_nonempty:
            return h
        if isinstance(lp_feasible(LPProblem(h.n, h.rows)), Feasible):
            return h


def random_affine_1d_loop(rng: random.Random) -> str:
    """Loop 'while x >= g do x' == alpha*x + beta' with small rationals."""
    def small_rational() -> str:
        num = rng.randint(-6, 6)
        den = rng.choice([1, 1, 1, 2, 3])
        return f"{num}/{den}" if den > 1 else str(num)

    alpha, beta, g = small_rational(), small_rational(), small_rational()
    return (f"loop(x) {{ guard: x >= {g}; "
            f"step: x' == {alpha}*x + {beta}; }}")


def affine_iteration_nonterminating(alpha: Q, beta: Q, g: Q) -> bool:
    """Closed-form fate of x' = alpha x + beta under guard x >= g.

    Independent oracle: fixed point beta/(1-alpha) plus a monotonicity
    case split; no polyhedral code involved.
    """
    if alpha > 1:
        return True  # any start above max(g, fixed point) escapes upward
    if alpha == 1:
        return beta >= 0
    fixed = beta / (1 - alpha)
    return fixed >= g
