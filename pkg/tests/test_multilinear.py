from fractions import Fraction
from math import comb

import pytest

from koszul.models import free_mult
from koszul.multilinear import (
    KoszulClass,
    SkewMap,
    apply_differential,
    check_wedge,
    koszul_differential,
    koszul_restriction,
    pfaffian4,
    sort_sign,
    support,
    wedge_basis,
    wedge_vectors,
)
from koszul.linalg import rank


def test_wedge_basis_lex():
    assert wedge_basis(4, 2) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert wedge_basis(3, 0) == ((),)
    assert check_wedge([0, 2], 3) == (0, 2)
    for bad in ([2, 0], [1, 1]):
        with pytest.raises(ValueError):
            check_wedge(bad, 3)
    with pytest.raises(ValueError):
        check_wedge([3], 3)


def test_sort_sign():
    assert sort_sign([1, 0]) == (-1, (0, 1))
    assert sort_sign([2, 0, 1]) == (1, (0, 1, 2))
    assert sort_sign([0, 0])[0] == 0


def test_wedge_vectors_minors():
    w = wedge_vectors([[1, 2, 0], [0, 1, 3]], 3)
    assert w == {(0, 1): 1, (0, 2): 3, (1, 2): 6}


def test_conic_class_is_cycle(conic):
    # x^2 (x) y^2 - xy (x) xy
    c = KoszulClass(1, 3, {((0,), 2): 1, ((1,), 1): -1})
    assert apply_differential(c, conic) == {}
    assert KoszulClass(1, 3, {((0,), 2): 1}) - KoszulClass(1, 3, {((0,), 2): 1}) == KoszulClass(1, 3, {})


def test_differential_shapes():
    mult = free_mult(2)
    d = koszul_differential(2, 2, mult)
    assert d.ncols == comb(2, 2) * 2
    assert d.nrows == 2 * mult.dim2


def test_restriction_antisymmetric():
    r = koszul_restriction(1, 2)
    # same sign rule as the differential: e0^e1 -> e1(x)e0 - e0(x)e1
    assert r.to_dense() == [[0], [-1], [1], [0]]
    assert rank(koszul_restriction(1, 3)) == 3


@pytest.mark.parametrize("n,p", [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)])
def test_complex_property(n, p):
    mult = free_mult(n)
    assert koszul_differential(p, n, mult).matmul(koszul_restriction(p, n)).is_zero()


def test_pfaffian_scalar():
    a = SkewMap(4, 1, {(0, 1): (1,), (2, 3): (1,)})
    assert pfaffian4(a, 0, 1, 2, 3, free_mult(1)) == [1]
    zero_row = SkewMap(4, 1, {(1, 2): (3,), (2, 3): (5,)})
    assert not any(pfaffian4(zero_row, 0, 1, 2, 3, free_mult(1)))


def test_skewmap_validation():
    a = SkewMap(3, 2, {(0, 2): (1, 0)})
    assert a.entry(2, 0) == (-1, 0)
    assert a.evaluate([1, 0, 0], [0, 0, 1]) == [1, 0]
    with pytest.raises(ValueError):
        SkewMap(3, 2, {(1, 1): (1, 0)})


def test_support_examples():
    c = KoszulClass(2, 4, {((0, 1), 3): 1})
    assert len(support(c)) == 2
    conic = KoszulClass(1, 3, {((0,), 2): 1, ((1,), 1): -1})
    assert support(conic) == [[1, 0, 0], [0, 1, 0]]
    c4 = KoszulClass(2, 4, {((0, 1), 0): 1, ((2, 3), 0): 1})
    assert len(support(c4)) == 4
    with pytest.raises(ValueError):
        support(KoszulClass(1, 3, {}))


def test_class_vector_round_trip():
    c = KoszulClass(2, 4, {((0, 2), 1): Fraction(1, 3), ((1, 3), 0): -2})
    assert KoszulClass.from_vector(2, 4, c.to_vector()) == c
