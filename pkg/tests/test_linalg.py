from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from koszul import linalg
from koszul.linalg import SparseMat, SpanReducer, format_rat, kernel_basis, membership, rank, rat, rref, solve


def M(rows):
    return SparseMat.from_dense(rows)


def test_rat_parsing():
    assert rat("3/6") == Fraction(1, 2)
    assert rat(" -2 ") == -2
    assert format_rat(Fraction(-4, 6)) == "-2/3"
    assert format_rat(5) == "5/1"
    with pytest.raises(TypeError):
        rat(0.5)


def test_rank_examples():
    assert rank(M([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3
    assert rank(M([[0] * 4] * 4)) == 0
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(M([[1, 2]])) == [[-2, 1]]
    assert kernel_basis(M([[1, 0], [0, 1]])) == []
    K = kernel_basis(M([[1, 1, 1]]))
    assert len(K) == 2
    assert all(sum(v) == 0 for v in K)


def test_solve_examples():
    assert solve(M([[1, 0], [0, 1]]), [3, 4]) == [3, 4]
    assert solve(M([[1, 2]]), [3]) == [3, 0]
    assert solve(M([[1], [0]]), [0, 1]) is None
    with pytest.raises(ValueError):
        solve(M([[1, 2]]), [1, 2])


def test_membership_examples():
    assert membership([2, 4], [[1, 2]])
    assert not membership([1, 0], [[0, 1]])
    assert membership([0, 0], [])


def test_sparse_construction_drops_zeros():
    m = SparseMat(2, 2, {(0, 0): 0, (1, 1): "1/2"})
    assert m.entries == {(1, 1): Fraction(1, 2)}
    with pytest.raises(IndexError):
        SparseMat(1, 1, {(1, 0): 1})
    with pytest.raises(ValueError):
        SparseMat.from_dense([[1, 2], [3]])


def test_span_reducer():
    r = SpanReducer([[1, 1, 0]])
    assert r.add([0, 1, 1])
    assert not r.add([1, 2, 1])
    assert r.contains({0: 1, 2: -1})
    assert r.dim == 2


small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=7, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = M(rows)
    K = kernel_basis(m)
    assert rank(m) + len(K) == m.ncols
    for v in K:
        assert not any(m.matvec(v))


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent(rows, data):
    m = M(rows)
    x = data.draw(st.lists(small, min_size=m.ncols, max_size=m.ncols))
    b = m.matvec(x)
    y = solve(m, b)
    assert y is not None and m.matvec(y) == b


@settings(max_examples=60, deadline=None)
@given(matrices(30, 30))
def test_dense_and_sparse_rref_agree(rows):
    m = M(rows)
    r = m.rows()
    assert linalg._rref_dense(r, m.ncols) == linalg._rref_sparse(r, m.ncols)
    assert rref(m) == linalg._rref_dense(r, m.ncols)
