from fractions import Fraction

import pytest

from koszul.models import (
    CurveModel,
    ModelError,
    base_locus_rational,
    divide_binary,
    mult_table,
    quadric_rank,
)

H = Fraction(1, 2)
Q_GRAM = [[0, 0, 0, H, 0], [0, 0, 0, 0, -H], [0, 0, 1, 0, 0], [H, 0, 0, 0, 0], [0, -H, 0, 0, 0]]


def test_rational_conic_table():
    m = mult_table(CurveModel.rational(2))
    assert (m.dim1, m.dim2) == (3, 5)
    assert m.multiply([1, 0, 0], [0, 0, 1]) == [0, 0, 1, 0, 0]  # x^2 * y^2 = x^2 y^2


def test_quadric_presented_dims():
    m = mult_table(CurveModel.quadric_presented(5, [Q_GRAM]))
    assert (m.dim1, m.dim2) == (5, 14)
    assert mult_table(CurveModel.quadric_presented(4, [])).dim2 == 10


def test_quadric_relation_vanishes():
    m = mult_table(CurveModel.quadric_presented(5, [Q_GRAM]))
    e = lambda i: [int(i == j) for j in range(5)]
    q = [a - b + c for a, b, c in zip(m.multiply(e(0), e(3)), m.multiply(e(1), e(4)), m.multiply(e(2), e(2)))]
    assert not any(q)


def test_dependent_quadrics_rejected():
    doubled = [[2 * x for x in r] for r in Q_GRAM]
    with pytest.raises(ModelError):
        mult_table(CurveModel.quadric_presented(5, [Q_GRAM, doubled]))


def test_quadric_rank():
    assert quadric_rank(Q_GRAM) == 5
    assert quadric_rank([[0, H], [H, 0]]) == 2
    assert quadric_rank([[1]]) == 1


def test_base_locus():
    B = base_locus_rational([[1, 0, 0, 0], [0, 1, 0, 0]])  # x^3, x^2 y
    assert B.degree == 2 and B.roots == (((0, 1), 2),)
    assert base_locus_rational([[1, 0, 0], [0, 0, 1]]).is_empty()
    B = base_locus_rational([[0, 1, 0, 0], [0, 0, 1, 0]])  # x^2 y, x y^2
    assert B.degree == 2 and len(B.roots) == 2


def test_base_locus_irreducible_factor():
    # (x^2 + y^2) x and (x^2 + y^2) y
    B = base_locus_rational([[1, 0, 1, 0], [0, 1, 0, 1]])
    assert B.degree == 2 and B.roots == () and B.irreducible[0][1] == 2


def test_divide_binary():
    assert divide_binary([1, 0, -1], [1, 1]) == [1, -1]
    with pytest.raises(ValueError):
        divide_binary([1, 0, 1], [1, 1])
