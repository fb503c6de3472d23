import json

import pytest
from hypothesis import given, settings, strategies as st

from opkoszul.complexes import (ChainComplex, ChainMap, UncertifiedDegree, cocone, cone, les_exactness,
                                shift, tensor, truncate)
from opkoszul.linalg import SparseMatrix


def point(degree, lo=-3, hi=3):
    return ChainComplex.from_dims({degree: 1}, lo=lo, hi=hi)


def identity_2term():
    # Q --1--> Q in degrees 1 -> 0: acyclic
    return ChainComplex.from_dims({0: 1, 1: 1}, {1: [[1]]})


def test_acyclic_two_term():
    c = identity_2term()
    assert c.homology_table() == {0: 0, 1: 0}
    assert c.connectivity().infinite


def test_d_squared_is_checked():
    with pytest.raises(ValueError):
        ChainComplex.from_dims({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]})


def test_uncertified_degree_raises():
    c = ChainComplex.from_dims({0: 1, 1: 1}, top_exact=False)
    assert c.valid == (0, 0)
    with pytest.raises(UncertifiedDegree):
        c.betti(1)


def test_cocone_of_zero_map():
    s, t = point(0), point(0)
    c = cocone(ChainMap.zero(s, t))
    assert c.betti(0) == 1 and c.betti(-1) == 1


def test_cone_of_identity_is_acyclic():
    s = point(1)
    c = cone(ChainMap.identity(s))
    assert all(c.betti(i) == 0 for i in range(c.valid[0], c.valid[1] + 1))


def test_cocone_of_identity_is_acyclic():
    c = cocone(ChainMap.identity(identity_2term()))
    assert all(c.betti(i) == 0 for i in range(c.valid[0], c.valid[1] + 1))


def test_shift_and_tensor():
    a = point(1, lo=0, hi=4)
    assert shift(a, 2).betti(3) == 1
    t = tensor(point(1, 0, 2), point(2, 0, 3))
    assert t.homology_table() == {i: (1 if i == 3 else 0) for i in range(t.valid[0], t.valid[1] + 1)}


def test_truncation_keeps_low_homology():
    c = ChainComplex.from_dims({0: 1, 1: 1, 2: 1})
    t = truncate(c, 1)
    assert t.homology_table() == {0: 1, 1: 1}


def test_connectivity_values():
    c = ChainComplex.from_dims({2: 1}, lo=0, hi=4, top_exact=False)
    conn = c.connectivity()
    assert conn.value == 1 and conn.exact
    empty = ChainComplex.from_dims({}, lo=0, hi=4, top_exact=False)
    assert str(empty.connectivity()) == ">= 3"


@st.composite
def two_term_maps(draw):
    """A chain map between two complexes Q^a -> Q^b (degrees 1 -> 0)."""
    a = draw(st.integers(1, 3))
    b = draw(st.integers(1, 3))
    ent = st.integers(-2, 2)
    d_src = draw(st.lists(st.lists(ent, min_size=a, max_size=a), min_size=b, max_size=b))
    src = ChainComplex.from_dims({0: b, 1: a}, {1: d_src}, lo=-1, hi=2)
    # the target is a copy of the source; the map is a scalar on each degree so it commutes with d
    c = draw(st.integers(-2, 2))
    blocks = {i: SparseMatrix(src.dim(i), src.dim(i), {(k, k): c for k in range(src.dim(i))})
              for i in range(src.lo, src.hi + 1)}
    return ChainMap(src, src, blocks)


@settings(max_examples=40, deadline=None)
@given(two_term_maps())
def test_cocone_long_exact_sequence(f):
    assert all(les_exactness(f).values())


@settings(max_examples=40, deadline=None)
@given(two_term_maps())
def test_euler_characteristic_matches_homology(f):
    c = f.source
    assert c.euler_characteristic() == sum((-1) ** i * c.betti(i) for i in range(c.valid[0], c.valid[1] + 1))


def test_serialization_round_trip():
    c = ChainComplex.from_dims({0: 2, 1: 2, 2: 1}, {1: [[1, 0], [0, 0]], 2: [[0], [1]]}, lo=0, hi=3)
    again = ChainComplex.from_dict(json.loads(json.dumps(c.to_dict())))
    assert again.homology_table() == c.homology_table()
    assert again.valid == c.valid
