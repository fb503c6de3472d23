import pytest

from opkoszul.algebras import PresentationError, free_algebra
from opkoszul.complexes import les_exactness
from opkoszul.koszul import (associative_lift, completion_check, counit_cube, counit_layer_check, layers_check,
                             split_augmentation_check, unit_connectivity_check, unit_cube)


@pytest.fixture(scope="module")
def com_x():
    return free_algebra("com", [("x", 1)], name="free com on x")


@pytest.mark.parametrize("n,top,conn", [(0, 5, "1"), (1, 5, ">= 2"), (1, 6, "2")])
def test_unit_connectivity(free_deg1, n, top, conn):
    r = unit_connectivity_check(free_deg1, n, top=top)
    assert r.passed and r.data["connectivity"] == conn and not r.data["uncertified"]


def test_unit_connectivity_short_window_is_uncertified(free_deg1):
    r = unit_connectivity_check(free_deg1, 1, top=2)
    assert r.data["uncertified"] and not r.passed


def test_unit_cube_edges_have_exact_sequences(free_deg1):
    cube = unit_cube(free_deg1, 0, top=4)
    for f in cube.edges.values():
        assert all(les_exactness(f).values())


def test_unit_connectivity_degree_two_generator(free_deg2):
    assert unit_connectivity_check(free_deg2, 0, top=6).passed


@pytest.mark.parametrize("n,conn", [(0, "2"), (1, "4")])
def test_counit_layers(com_x, n, conn):
    r = counit_layer_check(com_x, n, top=8)
    assert r.passed and r.data["connectivity"] == conn == str(r.data["bound"])


def test_counit_layer_vacuous_and_wrong_kind(com_x, free_deg1):
    assert counit_layer_check(com_x, -1, top=4).passed
    with pytest.raises(ValueError):
        counit_layer_check(free_deg1, 0, top=4)


def test_counit_cube_dimension(com_x):
    assert counit_cube(com_x, 2, top=4).dimension == 2


def test_split_augmentation(com_x):
    assert split_augmentation_check(com_x, top=5).passed


def test_completion(free_deg1):
    r = completion_check(free_deg1, 1, top=5)
    assert r.passed
    assert [row["H(x)"] for row in r.rows if "H(x)" in row] == [0, 1, 1]
    assert [row["surjective"] for row in r.rows if "surjective" in row] == [True]


def test_layers(free_deg1):
    r = layers_check(free_deg1, top=5)
    assert r.passed and r.rows


def test_associative_lift(com_x):
    lift = associative_lift(com_x)
    assert lift.kind == "A" and [g.name for g in lift.generators] == ["x"]
    with pytest.raises(PresentationError):
        associative_lift(free_algebra("poisson:2", [("x", 1)]))
