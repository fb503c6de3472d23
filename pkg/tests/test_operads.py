from math import factorial

import pytest
from sympy.functions.combinatorial.numbers import stirling

from opkoszul.operads import (associated_graded_isomorphism, filtration_piece, make_ass, make_com,
                              make_poisson, operad_map, pbw_basis, pbw_matrix, pbw_weight_distribution,
                              verify_right_action_factorization)
from opkoszul.linalg import rank


@pytest.fixture(scope="module")
def ass():
    return make_ass(5, validate_cap=4)


def test_ass_and_com_dimensions(ass):
    assert [ass.dim(n) for n in range(1, 6)] == [factorial(n) for n in range(1, 6)]
    com = make_com(5)
    assert [com.dim(n) for n in range(1, 6)] == [1] * 5


@pytest.mark.parametrize("n_shift", [1, 2, 3])
def test_poisson_operads_validate(n_shift):
    p = make_poisson(n_shift, cap=4, validate_cap=4)
    p.validate(4)
    assert [p.dim(n) for n in range(1, 5)] == [factorial(n) for n in range(1, 5)]


def test_poisson_degrees():
    assert make_poisson(2, cap=3).carrier.dims_by_degree(3) == {0: 1, 1: 3, 2: 2}
    assert make_poisson(3, cap=3).carrier.dims_by_degree(3) == {0: 1, 2: 3, 4: 2}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_pbw_weights_are_stirling(n):
    dist = pbw_weight_distribution(n)
    assert dist == [int(stirling(n, n - k, kind=1, signed=False)) for k in range(n)]
    assert sum(dist) == factorial(n)


def test_pbw_basis_is_a_basis(ass):
    for n in range(1, 5):
        assert len(pbw_basis(n)) == factorial(n)
        assert rank(pbw_matrix(ass, n)) == factorial(n)


def test_filtration_pieces(ass):
    eq1 = filtration_piece(ass, 1, "eq")
    assert eq1.dims() == {1: 0, 2: 1, 3: 3, 4: 6, 5: 10}
    assert filtration_piece(ass, 0, "le").dims() == {n: 1 for n in range(1, 6)}
    assert {n: d for n, d in filtration_piece(ass, 1, "gt").dims().items() if d} == {3: 2, 4: 17, 5: 109}
    assert eq1.lowest_arity() == 2


def test_right_action_factors_through_com(ass):
    ok, witness = verify_right_action_factorization(filtration_piece(ass, 1, "eq"), cap=4)
    assert ok, witness
    with pytest.raises(ValueError):
        verify_right_action_factorization(filtration_piece(ass, 1, "le"), cap=4)


def test_operad_maps_validate(ass):
    operad_map(ass, make_com(5)).validate(4)
    operad_map(make_poisson(2, cap=4), make_com(4)).validate(4)


def test_associated_graded_is_poisson(ass):
    mats = associated_graded_isomorphism(make_ass(4), make_poisson(1, cap=4), cap=4)
    for (n, w), m in mats.items():
        assert rank(m) == m.nrows == m.ncols
