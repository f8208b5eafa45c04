import pytest

from loopwitness.errors import DimensionMismatch
from loopwitness.linalg import (cross2, dot, gauss_solve, identity, mat,
                                matmul, matvec, maxabs, primitive, rank, vec)
from loopwitness.qnum import Q


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        dot(vec([1, 2]), vec([1]))
    with pytest.raises(DimensionMismatch):
        matmul(mat([[1, 2]]), mat([[1, 2]]))
    with pytest.raises(DimensionMismatch):
        mat([[1, 2], [3]])


def test_exact_products():
    m = mat([["1/2", 1], [0, "2/3"]])
    assert matvec(m, vec([2, 3])) == vec([4, 2])
    assert matmul(m, identity(2)) == m


def test_gauss_solve_unique_and_inconsistent():
    m = mat([[2, 1], [1, -1]])
    assert gauss_solve(m, vec([5, 1])) == vec([2, 1])
    assert gauss_solve(mat([[1, 1], [2, 2]]), vec([1, 3])) is None
    underdetermined = gauss_solve(mat([[1, 1]]), vec([3]))
    assert underdetermined is not None
    assert sum(underdetermined) == 3


def test_rank_and_primitive():
    assert rank(mat([[1, 2], [2, 4]])) == 1
    assert rank(mat([[1, 0], [0, 1], [1, 1]])) == 2
    assert primitive(vec(["2/3", "4/3"])) == vec([1, 2])
    assert primitive(vec([-4, 6])) == vec([-2, 3])


def test_maxabs_cross():
    assert maxabs(vec(["-5/2", 2])) == Q(5, 2)
    assert cross2(vec([1, 0]), vec([0, 1])) == 1
    assert cross2(vec([2, 1]), vec([4, 2])) == 0
