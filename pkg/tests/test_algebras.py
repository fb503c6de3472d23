import pytest

from opkoszul.algebras import (AlgebraPresentation, PresentationError, dual_numbers_model, free_algebra,
                               quasifree_abelianize, restrict, square_zero, symmetric_algebra)


def test_free_algebra_dimensions():
    x = free_algebra("ass", [("x", 1)])
    assert x.dims(max_degree=4) == {(d, d): 1 for d in range(1, 5)}
    y = free_algebra("com", [("x", 1)])
    assert y.dims(max_degree=4) == {(1, 1): 1}


def test_dual_numbers_model_validates():
    m = dual_numbers_model(4)
    assert [g.degree for g in m.generators] == [0, 1, 2, 3]
    assert [g.weight for g in m.generators] == [1, 2, 3, 4]


def test_degree_mismatch_is_reported():
    with pytest.raises(PresentationError) as e:
        AlgebraPresentation("ass", [("t1", 0), ("t2", 2)], {"t2": [(1, ["t1"])]})
    assert e.value.generator == "t2"


def test_weight_mismatch_is_reported():
    with pytest.raises(PresentationError, match="weight"):
        AlgebraPresentation("ass", [("t1", 0, 1), ("t2", 1, 1)], {"t2": [(1, ["t1", "t1"])]})


def test_d_squared_is_checked():
    with pytest.raises(PresentationError, match="d\\^2"):
        AlgebraPresentation("ass", [("a", 1), ("b", 2), ("c", 3)],
                            {"b": [(1, ["a"])], "c": [(1, ["b"])]})


def test_unknown_generator_and_operad():
    with pytest.raises(PresentationError):
        AlgebraPresentation("ass", [("x", 1)], {"x": [(1, ["z"])]})
    with pytest.raises(PresentationError):
        free_algebra("lie", [("x", 1)])
    with pytest.raises(PresentationError):
        free_algebra("poisson:0", [("x", 1)])


def test_strict_algebras_validate():
    s = symmetric_algebra(["a", "b"], 3)
    assert len(s.generators) == 2 + 3 + 4
    with pytest.raises(PresentationError, match="associative"):
        AlgebraPresentation("ass", [("a", 0, 1), ("b", 0, 2), ("c", 0, 3)], style="strict",
                            multiplication={("a", "a"): [(1, "b")], ("b", "a"): [(1, "c")]})


def test_abelianize_and_restrict():
    m = dual_numbers_model(3)
    ab = quasifree_abelianize(m)
    assert ab.kind == "C"
    sq = restrict(square_zero(), "ass")
    assert sq.kind == "A" and sq.is_strict
    with pytest.raises(PresentationError):
        restrict(m, "ass")
