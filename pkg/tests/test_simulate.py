from loopwitness.certificates import RunTrace, check_run
from loopwitness.linalg import vec
from loopwitness.loops import loop_to_relation, parse_loop
from loopwitness.qnum import Q
from loopwitness.simulate import estimate_directions, greedy_run


def test_l1_trace_increases(golden_relations):
    trace = greedy_run(golden_relations["L1"], vec([0]), 5)
    assert len(trace.points) == 6
    xs = [p[0] for p in trace.points]
    assert xs == sorted(xs) and xs[0] < xs[-1]
    assert all(trace.step_membership)
    assert check_run(golden_relations["L1"], trace)


def test_l2_trace_dead_end(golden_relations):
    trace = greedy_run(golden_relations["L2"], vec([5]), 10)
    # 5..0 step to -1 (the pair (0,-1) is still in K), then no successor
    assert [p[0] for p in trace.points] == [5, 4, 3, 2, 1, 0, -1]
    assert all(trace.step_membership)


def test_start_without_successor(golden_relations):
    trace = greedy_run(golden_relations["L2"], vec([-3]), 10)
    assert len(trace.points) == 1


def test_fixed_point_trace(golden_relations):
    trace = greedy_run(golden_relations["L4"], vec([0, 0]), 3)
    assert all(p == vec([0, 0]) for p in trace.points)


def test_nondeterministic_bodies_take_interior_steps():
    rel = loop_to_relation(
        parse_loop("loop(x) { guard: x >= 0; step: x' >= x + 1; }"))
    trace = greedy_run(rel, vec([0]), 6)
    xs = [p[0] for p in trace.points]
    assert len(xs) == 7 and all(b >= a + 1 for a, b in zip(xs, xs[1:]))
    assert check_run(rel, trace)


def test_determinism(golden_relations):
    a = greedy_run(golden_relations["L5"], vec([0, 8]), 20)
    b = greedy_run(golden_relations["L5"], vec([0, 8]), 20)
    assert a.points == b.points


def test_estimate_linear_growth_direction():
    trace = RunTrace(tuple(vec([n, 1]) for n in range(41)), ())
    est = estimate_directions(trace)
    assert est.directions
    assert est.directions[0][0] == vec([1, 0])


def test_estimate_geometric_growth_ratio():
    trace = RunTrace(tuple(vec([2 ** n, n]) for n in range(13)), ())
    est = estimate_directions(trace)
    assert est.directions[0][0] == vec([1, 0])
    assert est.growth_ratios[0] == 2


def test_estimate_bounded_traces_are_empty():
    constant = RunTrace(tuple(vec([3, 3]) for _ in range(12)), ())
    assert estimate_directions(constant).directions == ()
    short = RunTrace(tuple(vec([n, 0]) for n in range(5)), ())
    assert estimate_directions(short).directions == ()


def test_estimate_negative_direction():
    trace = RunTrace(tuple(vec([-3 * n, n]) for n in range(40)), ())
    est = estimate_directions(trace)
    assert est.directions[0][0] == vec([-1, Q(1, 3)])
