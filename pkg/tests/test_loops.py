import random

import pytest
from hypothesis import given, settings, strategies as st

from loopwitness.errors import (LoopParseError, StrictInequalityUnsupported,
                                UnsupportedDimension)
from loopwitness.linalg import vec
from loopwitness.loops import (ConstraintLoop, loop_hash, loop_to_relation,
                               parse_loop, pretty_print)
from loopwitness.lp import EQ, GE, Constraint
from loopwitness.qnum import Q


def test_parse_l1():
    loop = parse_loop("loop(x) { guard: x >= 0; step: x' == x + 1; }")
    assert loop.var_names == ("x",)
    assert loop.guard_rows == (Constraint(vec([1]), GE, Q(0)),)
    (body,) = loop.body_rows
    assert body.relation == EQ
    assert body.coeffs == vec([-1, 1]) and body.rhs == 1


def test_parse_two_variables():
    loop = parse_loop(
        "loop(x,y) { guard: x >= 0; step: x' == x + y; y' == y - 1; }")
    assert loop.d == 2
    assert len(loop.body_rows) == 2
    B, b, A, a = loop.inequality_form()
    assert B == [[1, 0]] and b == [0]
    assert len(A) == 4  # two equalities split into four >= rows


def test_strict_inequality_rejected_with_position():
    with pytest.raises(StrictInequalityUnsupported) as info:
        parse_loop("loop(x) { guard: x > 0; step: x' == x; }")
    assert info.value.line == 1 and info.value.column > 0


def test_dimension_cap():
    with pytest.raises(UnsupportedDimension):
        parse_loop("loop(x,y,z) { guard: x >= 0; step: x' == x; }")


def test_diagnostics():
    with pytest.raises(LoopParseError):
        parse_loop("loop(x) { guard: q >= 0; step: x' == x; }")
    with pytest.raises(LoopParseError):
        parse_loop("loop(x) { guard: x' >= 0; step: x' == x; }")
    with pytest.raises(LoopParseError):
        parse_loop("loop(x) { guard: x >= 0; }")
    with pytest.raises(LoopParseError):
        parse_loop("while (x >= 0) x++;")


def test_json_matrix_form():
    loop = parse_loop('{"d": 1, "B": [["1"]], "b": ["0"],'
                      ' "A": [["-1", "1"]], "a": ["1"]}')
    assert loop.d == 1
    rel = loop_to_relation(loop)
    assert rel.member(vec([0]), vec([1]))
    assert not rel.member(vec([-1]), vec([0]))
    with pytest.raises(LoopParseError):
        parse_loop('{"d": 1, "B": [["1"]], "b": [], "A": [], "a": []}')


def test_rational_and_decimal_literals():
    loop = parse_loop(
        "loop(x) { guard: 1/2 x >= 0.25; step: x' == 2*x - 3/2; }")
    assert loop.guard_rows[0].coeffs == vec([Q(1, 2)])
    assert loop.guard_rows[0].rhs == Q(1, 4)
    assert loop.body_rows[0].rhs == Q(-3, 2)


def test_relation_membership_matches_direct_evaluation():
    loop = parse_loop(
        "loop(x,y) { guard: x >= 0; step: x' >= x + y; y' <= y; }")
    rel = loop_to_relation(loop)
    rng = random.Random(5)
    for _ in range(50):
        x = vec([rng.randint(-3, 3), rng.randint(-3, 3)])
        x2 = vec([rng.randint(-3, 3), rng.randint(-3, 3)])
        direct = (x[0] >= 0 and x2[0] >= x[0] + x[1] and x2[1] <= x[1])
        assert rel.member(x, x2) == direct


def test_pretty_print_roundtrip_golden(golden_loops):
    for loop in golden_loops.values():
        assert parse_loop(pretty_print(loop)) == loop


rational_text = st.one_of(
    st.integers(-9, 9).map(str),
    st.tuples(st.integers(-9, 9), st.integers(1, 9)).map(
        lambda t: f"{t[0]}/{t[1]}"))


@settings(max_examples=60, deadline=None)
@given(st.lists(rational_text, min_size=4, max_size=4), rational_text,
       st.sampled_from([">=", "<=", "=="]))
def test_roundtrip_is_fixpoint(coeffs, rhs, relation):
    src = (f"loop(x,y) {{ guard: {coeffs[0]}*x + {coeffs[1]}*y >= {rhs}; "
           f"step: x' {relation} {coeffs[2]}*x + {coeffs[3]}*y; "
           f"y' == y; }}")
    loop = parse_loop(src)
    printed = pretty_print(loop)
    assert parse_loop(printed) == loop
    assert pretty_print(parse_loop(printed)) == printed
    assert loop_hash(loop) == loop_hash(parse_loop(printed))
