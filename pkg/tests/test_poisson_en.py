import pytest

from opkoszul.algebras import AlgebraPresentation, PresentationError, free_algebra
from opkoszul.poisson_en import (SURROGATE_NOTE, en_ab_connectivity_check, en_completeness_check,
                                 en_connectivity_lemma_check, en_conservativity_check, en_factorization_check,
                                 en_tower, morphism_images)


@pytest.fixture(scope="module")
def p2_x():
    return free_algebra("poisson:2", [("x", 1)], name="x")


@pytest.fixture(scope="module")
def p2_xb():
    return free_algebra("poisson:2", [("x", 1), ("b", 2)], name="x, b")


def test_requires_poisson_two_or_more(free_deg1):
    with pytest.raises(PresentationError):
        en_tower(free_deg1, 1, top=4)
    with pytest.raises(PresentationError):
        en_tower(free_algebra("poisson:1", [("x", 1)]), 1, top=4)


def test_en_tower_stage_count(p2_x):
    assert len(en_tower(p2_x, 2, top=4).stages) == 3


@pytest.mark.parametrize("check,args", [
    (en_completeness_check, (2, 5)),
    (en_connectivity_lemma_check, (2, 5)),
    (en_factorization_check, (1, 5)),
    (en_ab_connectivity_check, (5,)),
])
def test_checks_pass_and_carry_note(p2_x, check, args):
    r = check(p2_x, *args)
    assert r.passed, r.rows
    assert SURROGATE_NOTE in r.notes
    assert r.name.startswith("poisson:2")


def test_identity_is_conservative(p2_x):
    r = en_conservativity_check(p2_x, p2_x, morphism_images(p2_x, p2_x, {"x": [(1, ["x"])]}), 1, 4)
    assert r.passed and all(r.data.values())


def test_quasi_isomorphism_into_acyclic_extension(p2_x):
    tgt = AlgebraPresentation("poisson:2", [("x", 1), ("b", 2), ("c", 3)], {"c": [(1, ["b"])]}, name="cone")
    r = en_conservativity_check(p2_x, tgt, morphism_images(p2_x, tgt, {"x": [(1, ["x"])]}), 1, 4)
    assert r.passed and all(r.data.values())


def test_non_equivalence_is_detected_by_abelianization(p2_xb, p2_x):
    r = en_conservativity_check(p2_xb, p2_x, morphism_images(p2_xb, p2_x, {"x": [(1, ["x"])]}), 1, 4)
    assert r.passed
    assert not any(r.data.values())


def test_morphism_image_degree_is_checked(p2_x, p2_xb):
    with pytest.raises(PresentationError, match="wrong degree"):
        morphism_images(p2_xb, p2_x, {"b": [(1, ["x"])]})
    with pytest.raises(PresentationError, match="unknown"):
        morphism_images(p2_x, p2_x, {"z": []})
