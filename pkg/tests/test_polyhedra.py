import random

import pytest

from loopwitness.errors import EmptyPolyhedron
from loopwitness.linalg import vec
from loopwitness.lp import eq, ge
from loopwitness.polyhedra import (HPolyhedron, VPolyhedron, empty_hpoly,
                                   h_to_v, hpoly, hpoly_equal_lp,
                                   hpoly_subset_lp, is_empty, mw_decompose,
                                   project, prune_redundant, recession_cone,
                                   ri_member_hpoly, v_to_h, vpoly_member_lp)
from loopwitness.qnum import Q

from conftest import random_hpoly

SQUARE = hpoly(2, [ge([1, 0], 0), ge([0, 1], 0), ge([-1, 0], -1),
                   ge([0, -1], -1)])
ORTHANT = hpoly(2, [ge([1, 0], 0), ge([0, 1], 0)])
WEDGE = hpoly(2, [ge([1, 0], 1), ge([-1, 1], 0)])


def test_h_to_v_unit_square():
    v = h_to_v(SQUARE)
    assert set(v.vertices) == {vec([0, 0]), vec([1, 0]), vec([0, 1]),
                               vec([1, 1])}
    assert v.rays == () and v.lines == ()


def test_h_to_v_orthant():
    v = h_to_v(ORTHANT)
    assert v.vertices == (vec([0, 0]),)
    assert set(v.rays) == {vec([1, 0]), vec([0, 1])}


def test_h_to_v_wedge_with_grid_oracle():
    v = h_to_v(WEDGE)
    assert v.vertices == (vec([1, 1]),)
    assert set(v.rays) == {vec([0, 1]), vec([1, 1])}
    # membership agreement on a 10x10 rational grid
    for i in range(10):
        for j in range(10):
            p = vec([Q(i, 2), Q(j, 2)])
            assert WEDGE.member(p) == vpoly_member_lp(v, p)


def test_v_to_h_examples():
    h = v_to_h(VPolyhedron(2, (vec([0, 0]),),
                           (vec([1, 0]), vec([0, 1])), ()))
    assert hpoly_equal_lp(h, ORTHANT)
    seg = v_to_h(VPolyhedron(1, (vec([0]), vec([1])), (), ()))
    assert hpoly_equal_lp(seg, hpoly(1, [ge([1], 0), ge([-1], -1)]))
    wedge = v_to_h(VPolyhedron(2, (vec([1, 1]),),
                               (vec([0, 1]), vec([1, 1])), ()))
    assert hpoly_equal_lp(wedge, WEDGE)


def test_v_to_h_empty_is_canonical():
    h = v_to_h(VPolyhedron(2, (), (), ()))
    assert is_empty(h)
    assert h == empty_hpoly(2)


def test_recession_cone_examples():
    rec = recession_cone(WEDGE)
    assert hpoly_equal_lp(rec, hpoly(2, [ge([1, 0], 0), ge([-1, 1], 0)]))
    rec_sq = recession_cone(SQUARE)
    origin_only = hpoly(2, [eq([1, 0], 0), eq([0, 1], 0)])
    assert hpoly_equal_lp(rec_sq, origin_only)
    k1 = hpoly(2, [ge([1, 0], 0), eq([-1, 1], 1)])
    assert hpoly_equal_lp(recession_cone(k1),
                          hpoly(2, [ge([1, 0], 0), eq([-1, 1], 0)]))


def test_recession_cone_requires_nonempty():
    with pytest.raises(EmptyPolyhedron):
        recession_cone(hpoly(1, [ge([1], 1), ge([-1], 0)]))


def test_recession_sample_directions():
    # K + R+ z stays in K for the wedge's recession directions, on samples
    rec = recession_cone(WEDGE)
    for z in ((1, 1), (0, 1), (2, 3)):
        assert rec.member(vec(z))
        for base in ((1, 1), (2, 5)):
            for lam in (Q(1, 2), Q(3), Q(10)):
                moved = vec([b + lam * zi for b, zi in zip(base, z)])
                assert WEDGE.member(moved)


def test_project_examples():
    p = project(hpoly(2, [ge([1, 0], 0), ge([0, 1], 0), ge([-1, -1], -1)]),
                [0])
    assert hpoly_equal_lp(p, hpoly(1, [ge([1], 0), ge([-1], -1)]))
    p2 = project(hpoly(2, [eq([1, -1], 0), ge([1, 0], 2)]), [1])
    assert hpoly_equal_lp(p2, hpoly(1, [ge([1], 2)]))


def test_project_of_empty_is_empty():
    p = project(hpoly(2, [ge([1, 0], 1), ge([-1, 0], 0)]), [1])
    assert is_empty(p)


def test_mw_decompose_examples():
    compact, cone = mw_decompose(SQUARE)
    assert set(compact.vertices) == set(h_to_v(SQUARE).vertices)
    assert cone.rays == () and cone.lines == ()
    compact, cone = mw_decompose(WEDGE)
    assert compact.vertices == (vec([1, 1]),)
    assert set(cone.rays) == {vec([0, 1]), vec([1, 1])}
    with pytest.raises(EmptyPolyhedron):
        mw_decompose(empty_hpoly(2))


def test_mw_recombination_on_samples():
    compact, cone = mw_decompose(WEDGE)
    rng = random.Random(7)
    rec = recession_cone(WEDGE)
    for _ in range(25):
        base = vec([Q(rng.randint(1, 6)), Q(rng.randint(0, 6))])
        if not WEDGE.member(base):
            continue
        # membership of the sum decomposition: base = compact point + cone
        assert vpoly_member_lp(
            VPolyhedron(2, compact.vertices, cone.rays, cone.lines), base)
    for z in cone.rays:
        assert rec.member(z)


def test_ri_member_hpoly():
    seg = hpoly(1, [ge([1], 0), ge([-1], -1)])
    assert ri_member_hpoly(seg, vec([Q(1, 2)]))
    assert not ri_member_hpoly(seg, vec([0]))
    point = hpoly(1, [ge([1], 0), ge([-1], 0)])
    assert ri_member_hpoly(point, vec([0]))  # implicit equality
    with pytest.raises(EmptyPolyhedron):
        ri_member_hpoly(empty_hpoly(1), vec([0]))


def test_prune_redundant_keeps_set_and_empties():
    fat = hpoly(2, [ge([1, 0], 0), ge([0, 1], 0), ge([1, 1], 0),
                    ge([2, 1], -5)])
    pruned = prune_redundant(fat)
    assert len(pruned.rows) == 2
    assert hpoly_equal_lp(pruned, fat)
    gone = prune_redundant(hpoly(1, [ge([1], 1), ge([-1], -1),
                                     ge([1], 2)]))
    assert is_empty(gone)


def test_roundtrip_random_corpus():
    rng = random.Random(101)
    for _ in range(40):
        n = rng.choice([2, 3, 4])
        h = random_hpoly(rng, n)
        assert hpoly_equal_lp(v_to_h(h_to_v(h)), h)


def test_projection_recession_commute_random():
    rng = random.Random(303)
    for _ in range(20):
        h = random_hpoly(rng, 4)
        for keep in ([0, 1], [2, 3]):
            lhs = project(recession_cone(h), keep)
            rhs = recession_cone(project(h, keep))
            assert hpoly_equal_lp(lhs, rhs)


def test_projected_recession_one_sided_inclusion():
    # projection of the recession cone always sits inside the recession
    # cone of the projection, even before the reverse direction is checked
    rng = random.Random(404)
    for _ in range(15):
        h = random_hpoly(rng, 3)
        keep = [0, 1]
        assert hpoly_subset_lp(project(recession_cone(h), keep),
                               recession_cone(project(h, keep)))


def test_recession_unchanged_by_redundant_rows():
    rng = random.Random(505)
    for _ in range(15):
        h = random_hpoly(rng, 3)
        pruned = prune_redundant(h)
        if is_empty(pruned):
            continue
        assert hpoly_equal_lp(recession_cone(h), recession_cone(pruned))
