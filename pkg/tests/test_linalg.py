from fractions import Fraction

from hypothesis import given, settings, strategies as st

from opkoszul.linalg import (CoordinateSolver, SparseMatrix, Subspace, bareiss_rank, kernel, rank, rref)

small_ints = st.integers(min_value=-4, max_value=4)


def dense(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrices(draw):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    return draw(dense(r, c))


def test_rank_of_known_matrices():
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseMatrix.from_dense([[1, 0], [0, 1]])) == 2
    assert rank(SparseMatrix(3, 3)) == 0


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_agrees_with_bareiss(rows):
    assert rank(SparseMatrix.from_dense(rows)) == bareiss_rank(rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_of_transpose(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows)
    k = kernel(m)
    assert k.dim + rank(m) == m.ncols
    for v in k.basis:
        assert not m.apply(v)


def test_rref_pivots():
    _, r, pivots = rref(SparseMatrix.from_dense([[0, 2, 4], [0, 1, 2], [1, 0, 0]]))
    assert r == 2
    assert len(pivots) == 2


def test_subspace_operations():
    a = Subspace(3, [{0: 1}, {1: 1}])
    b = Subspace(3, [{1: 1}, {2: 1}])
    assert (a + b).dim == 3
    assert a.intersection(b).dim == 1
    assert a.contains({0: 2, 1: Fraction(1, 3)})
    assert not a.contains({2: 1})
    assert len(a.quotient_basis(Subspace(3, [{0: 1}]))) == 1


def test_coordinate_solver():
    solver = CoordinateSolver([{0: 1, 1: 1}, {1: 1}])
    co = solver.solve({0: 2, 1: 5})
    assert co == {0: 2, 1: 3}
    assert solver.solve({2: 1}) is None
