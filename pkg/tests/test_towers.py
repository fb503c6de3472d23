import pytest

from opkoszul.bar import algebra_complex, derived_abelianization, morphism_map
from opkoszul.algebras import AlgebraPresentation, free_algebra
from opkoszul.linalg import SparseMatrix
from opkoszul.towers import (TowerOfSpaces, ab_connectivity_check, completeness_check, connectivity_lemma_check,
                             factorization_check, fiber_sequence_check, lim_lim1, map_connectivity_check,
                             nc_tower)


def one(v):
    return SparseMatrix.from_dense([[v]])


def test_lim_of_constant_tower():
    r = lim_lim1(TowerOfSpaces([1, 1, 1, 1], [one(1)] * 3))
    assert (r.lim, r.lim1, r.stabilized, r.constant_from) == (1, 0, True, 0)


def test_lim_of_zero_maps():
    r = lim_lim1(TowerOfSpaces([1, 1, 1, 1], [SparseMatrix(1, 1)] * 3))
    assert (r.lim, r.lim1, r.stabilized) == (0, 0, True)


def test_lim1_without_certificate_uses_cokernel():
    r = lim_lim1(TowerOfSpaces([1, 1, 1], [one(1), SparseMatrix(1, 1)]))
    assert not r.stabilized
    assert r.lim1 == 0 and r.lim is None
    assert "cokernel" in r.note


def test_short_tower_is_indeterminate():
    r = lim_lim1(TowerOfSpaces([1, 1], [one(1)]))
    assert r.lim is None and not r.stabilized


def test_nc_tower_stage_maps(free_deg1):
    t = nc_tower(free_deg1, 2, top=5)
    assert len(t.stages) == 3 and len(t.maps) == 2
    for f in t.maps:
        f.check()
    # stage 0 is the derived abelianization
    assert t.stages[0].homology_table() == derived_abelianization(free_deg1, top=5).complex.homology_table()


def test_connectivity_lemma_on_corpus(corpus):
    for x in corpus:
        r = connectivity_lemma_check(x, 2, 5)
        assert r.passed, r.rows


def test_completeness_on_corpus(corpus):
    for x in corpus:
        r = completeness_check(x, 2, 5)
        assert r.passed, (x.name, r.rows, r.data)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_fiber_sequences(free_deg1, n):
    assert fiber_sequence_check(free_deg1, n, top=5).passed


def test_fiber_sequence_in_weight_mode():
    x = free_algebra("ass", [("x", 0, 1), ("y", 0, 1)])
    assert fiber_sequence_check(x, 1, weights=[1, 2, 3]).passed


@pytest.mark.parametrize("n", [1, 2])
def test_factorization_through_com(two_generator, n):
    assert factorization_check(two_generator, n, top=5).passed


def test_abelianization_ranges(free_deg1, free_deg2):
    r1 = ab_connectivity_check(free_deg1, 5)
    assert r1.passed and r1.data["iso_through"] == 1
    r2 = ab_connectivity_check(free_deg2, 7)
    assert r2.passed and r2.data["iso_through"] == 3


def test_map_connectivity_matches_abelianization():
    src = free_algebra("ass", [("x", 1), ("z", 3)])
    tgt = free_algebra("ass", [("x", 1)])
    images = {src.leaves[0]: tgt.parse_element([(1, ["x"])]), src.leaves[1]: {}}
    f = morphism_map(algebra_complex(src, top=6), algebra_complex(tgt, top=6), images)
    ab_f = morphism_map(derived_abelianization(src, top=6), derived_abelianization(tgt, top=6), images)
    r = map_connectivity_check(f, ab_f)
    assert r.passed, r.data
