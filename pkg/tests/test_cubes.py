import itertools

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_cube
from opkoszul.complexes import ChainComplex, ChainMap, cocone, les_exactness
from opkoszul.cubes import (Affine, CubeDiagram, admissible_partitions, all_faces, bk_holim, bm_estimate,
                            cartesian_degree, check_profile, cocartesian_degree, dual_bm_estimate, face,
                            infinity_cartesian_cube, one_cube, subsets, tothocofib, tothofib,
                            uniformity_translate)
from opkoszul.linalg import SparseMatrix

W2 = (1, 2)


def point(dim=1):
    return ChainComplex.from_dims({0: dim}, lo=-3, hi=3)


def zero():
    return ChainComplex.from_dims({}, lo=-3, hi=3)


def corner_cube():
    verts = {T: (point() if T == frozenset(W2) else zero()) for T in subsets(W2)}
    edges = {(T, w): ChainMap.zero(verts[T], verts[T | {w}]) for T in subsets(W2) for w in W2 if w not in T}
    return CubeDiagram(W2, verts, edges)


def test_total_fibre_of_corner_cube():
    c = tothofib(corner_cube())
    assert {i: c.betti(i) for i in range(-3, 2)} == {-3: 0, -2: 1, -1: 0, 0: 0, 1: 0}
    assert str(cartesian_degree(corner_cube())) == "-2"
    assert str(cocartesian_degree(corner_cube())) == "-1"


def test_total_cofibre_of_initial_corner():
    verts = {T: (point() if not T else zero()) for T in subsets(W2)}
    edges = {(T, w): ChainMap.zero(verts[T], verts[T | {w}]) for T in subsets(W2) for w in W2 if w not in T}
    c = tothocofib(CubeDiagram(W2, verts, edges))
    assert c.betti(2) == 1
    assert sum(c.betti(i) for i in range(c.valid[0], c.valid[1] + 1)) == 1


def test_one_cube_and_faces():
    f = ChainMap.identity(point())
    x = one_cube(f)
    assert cartesian_degree(x).infinite
    cube = corner_cube()
    assert len(all_faces(cube, 1)) == 4
    F = face(cube, {1}, {1, 2})
    assert F.dimension == 1


def test_noncommuting_square_is_rejected():
    verts = {T: point() for T in subsets(W2)}
    idm = lambda: ChainMap.identity(point())
    edges = {(T, w): idm() for T in subsets(W2) for w in W2 if w not in T}
    edges[(frozenset(), 1)] = ChainMap.zero(point(), point())
    with pytest.raises(ValueError, match="commute"):
        CubeDiagram(W2, verts, edges)


@pytest.mark.parametrize("seed", range(12))
def test_direction_order_invariance(seed):
    cube = random_cube(seed, 3)
    tables = {order: tothofib(cube, order).homology_table() for order in itertools.permutations(cube.W)}
    assert len({tuple(sorted(t.items())) for t in tables.values()}) == 1


@pytest.mark.parametrize("seed", range(6))
def test_edges_have_exact_long_sequences(seed):
    cube = random_cube(seed, 2)
    for f in cube.edges.values():
        assert all(les_exactness(f).values())


@pytest.mark.parametrize("f_col,g_col,target_dim,expected", [
    ([1], [1], 1, {0: 1, -1: 0}),
    ([1], [0], 1, {0: 1, -1: 0}),
    ([1, 0], [1, 0], 2, {0: 1, -1: 1}),
])
def test_holim_of_cospan_is_pullback(f_col, g_col, target_dim, expected):
    a, b, t = point(), point(), point(target_dim)
    f = ChainMap(a, t, {0: SparseMatrix.from_columns(target_dim, [{i: v for i, v in enumerate(f_col) if v}])})
    g = ChainMap(b, t, {0: SparseMatrix.from_columns(target_dim, [{i: v for i, v in enumerate(g_col) if v}])})
    p1, p2, p12 = frozenset({1}), frozenset({2}), frozenset({1, 2})
    arrows = {(p1, p12): f, (p2, p12): g}

    def arrow(s, e):
        if s == e:
            return ChainMap.identity(a if s == p1 else b if s == p2 else t)
        return arrows[(s, e)]
    h, chains = bk_holim([p1, p2, p12], {p1: a, p2: b, p12: t}, arrow)
    assert len(chains) == 5
    assert {i: h.betti(i) for i in expected} == expected


def test_infinity_cartesian_completion_is_cartesian():
    cube = random_cube(3, 2)
    punct_v = {T: v for T, v in cube.vertices.items() if T}
    punct_e = {(T, w): f for (T, w), f in cube.edges.items() if T}
    full = infinity_cartesian_cube(cube.W, punct_v, punct_e)
    full.validate()
    assert tothofib(full).connectivity().infinite
    for T in subsets(cube.W):
        if T:
            a, b = full.vertices[T], cube.vertices[T]
            lo, hi = max(a.valid[0], b.valid[0]), min(a.valid[1], b.valid[1])
            assert all(a.betti(i) == b.betti(i) for i in range(lo, hi + 1))


# ----------------------------------------------------------- BM calculators
def test_bm_examples():
    prof = {frozenset({1}): 1, frozenset({2}): 1}
    assert bm_estimate(W2, prof) == 0
    dual = {frozenset({1}): 2, frozenset({2}): 2, frozenset(W2): 4}
    assert dual_bm_estimate(W2, dual) == 6
    assert len(admissible_partitions((1, 2, 3))) == 4


def test_profile_hypotheses():
    with pytest.raises(ValueError, match="monotone"):
        check_profile(W2, {frozenset({1}): 3, frozenset({2}): 0, frozenset(W2): 1})
    with pytest.raises(ValueError, match="below"):
        check_profile(W2, {frozenset({1}): -2, frozenset({2}): 0, frozenset(W2): 1})
    with pytest.raises(ValueError):
        bm_estimate((1,), {frozenset({1}): 0})


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6))
def test_uniformity_round_trip(k):
    f = Affine(1, k)
    g = uniformity_translate(f, "cartesian")
    assert g == Affine(2, k - 1)
    assert uniformity_translate(g, "cocartesian") == f


def _random_monotone(rng, W):
    keys = [V for V in subsets(W) if V]
    prof = {}
    for V in sorted(keys, key=len):
        floor = max([prof[U] for U in prof if U < V], default=-1)
        prof[V] = rng.randint(floor, 4) if floor <= 4 else floor
    return keys, prof


@pytest.mark.parametrize("size", [2, 3, 4])
def test_vectorized_estimators_match_scalar(size):
    import random
    import numpy as np
    from opkoszul.cubes import bm_estimate_many, dual_bm_estimate_many
    rng = random.Random(size)
    W = tuple(range(1, size + 1))
    profiles = [_random_monotone(rng, W) for _ in range(40)]
    keys = profiles[0][0]
    table = np.array([[p[k] for k in keys] for _, p in profiles], dtype=np.int8)
    assert list(bm_estimate_many(W, table, keys)) == [bm_estimate(W, p) for _, p in profiles]
    assert list(dual_bm_estimate_many(W, table, keys)) == [dual_bm_estimate(W, p) for _, p in profiles]
