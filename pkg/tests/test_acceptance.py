"""Acceptance suite: one PASS/FAIL line per criterion, printed in the
terminal summary.  Each test records its verdict before asserting so a
failing criterion still reports."""

import itertools
import random
import time

import numpy as np
from sympy.functions.combinatorial.numbers import stirling
from sympy.utilities.iterables import multiset_partitions

from helpers import random_cube
from opkoszul.algebras import (AlgebraPresentation, dual_numbers_model, free_algebra, quasifree_abelianize,
                               restrict, square_zero, symmetric_algebra)
from opkoszul.bar import algebra_complex, derived_abelianization, homology_by_weight
from opkoszul.complexes import les_exactness
from opkoszul.cubes import (Affine, bm_estimate, bm_estimate_many, dual_bm_estimate, dual_bm_estimate_many,
                            subsets, tothofib, uniformity_translate)
from opkoszul.koszul import (counit_cube, counit_exchange_check, counit_layer_check, layers_check,
                             unit_connectivity_check, unit_cube)
from opkoszul.operads import pbw_weight_distribution
from opkoszul.poisson_en import en_completeness_check, en_connectivity_lemma_check, en_factorization_check
from opkoszul.towers import ab_connectivity_check, completeness_check, connectivity_lemma_check


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def verdict(record, number, title, ok, timer, budget, detail=""):
    within = timer.seconds < budget
    info = f"{timer.seconds:.1f}s of {budget}s" + (f"; {detail}" if detail else "")
    record(number, title, ok and within, info)
    assert ok, detail
    assert within, f"over budget: {timer.seconds:.1f}s"


# criterion 1 -------------------------------------------------------------
def test_free_algebra_abelianization(record_criterion, free_deg1):
    expected = {0: 0, 1: 1, 2: 0, 3: 0, 4: 0}
    with Timer() as t:
        bar_route = derived_abelianization(free_deg1, top=5).complex
        qf_route = algebra_complex(quasifree_abelianize(free_deg1), top=5).complex
        got = [{d: c.betti(d) for d in expected} for c in (bar_route, qf_route)]
        certified = all(c.valid[0] <= 0 and c.valid[1] >= 4 for c in (bar_route, qf_route))
    verdict(record_criterion, 1, "free-algebra abelianization", certified and got == [expected] * 2, t, 5,
            f"bar {got[0]}, quasi-free {got[1]}")


# criterion 2 -------------------------------------------------------------
def test_dual_numbers_two_routes(record_criterion):
    weights, degrees = [1, 2, 3], [0, 1, 2]
    with Timer() as t:
        strict = restrict(square_zero(), "ass")
        bar_route = homology_by_weight(derived_abelianization(strict, weights=weights), degrees)
        model = quasifree_abelianize(dual_numbers_model(3))
        qf_route = homology_by_weight(algebra_complex(model, weights=weights), degrees)
    verdict(record_criterion, 2, "dual-numbers two-route agreement", bar_route == qf_route, t, 60,
            f"by weight {bar_route}")


# criterion 3 -------------------------------------------------------------
def test_sym_restriction(record_criterion):
    weights, degrees = [1, 2, 3], [0, 1, 2]
    with Timer() as t:
        sym = restrict(symmetric_algebra(["a", "b"], 3), "ass")
        bar_route = homology_by_weight(derived_abelianization(sym, weights=weights), degrees)
        free_gc = free_algebra("com", [("a", 0, 1), ("b", 0, 1), ("c", 1, 2)])
        oracle = homology_by_weight(algebra_complex(free_gc, weights=weights), degrees)
    verdict(record_criterion, 3, "Sym restriction", bar_route == oracle, t, 60, f"by weight {bar_route}")


# criterion 4 -------------------------------------------------------------
def test_filtration_dimensions(record_criterion):
    with Timer() as t:
        ok, shown = True, []
        for n in range(1, 6):
            dims = pbw_weight_distribution(n)
            want = [int(stirling(n, n - k, kind=1, signed=False)) for k in range(n)]
            ok &= dims == want and sum(dims) == int(np.prod(range(1, n + 1)))
            shown.append(",".join(map(str, dims)))
    verdict(record_criterion, 4, "filtration dimensions", ok, t, 10, " / ".join(shown))


# criterion 5 -------------------------------------------------------------
def test_connectivity_lemma(record_criterion, corpus):
    with Timer() as t:
        reports = [connectivity_lemma_check(x, 3, 5) for x in corpus]
    verdict(record_criterion, 5, "connectivity lemma instances", all(reports), t, 120,
            f"{sum(len(r.rows) for r in reports)} piece bounds")


# criterion 6 -------------------------------------------------------------
def test_completeness(record_criterion, corpus):
    with Timer() as t:
        reports = [completeness_check(x, 3, 5) for x in corpus]
        limits_ok = all(v["lim1"] == 0 and v["stabilized"]
                        for r in reports for i, v in r.data["limits"].items() if i < 3)
    verdict(record_criterion, 6, "completeness engine", all(reports) and limits_ok, t, 120,
            f"{sum(len(r.rows) for r in reports)} stage comparisons")


# criterion 7 -------------------------------------------------------------
def test_abelianization_ranges(record_criterion, free_deg1, free_deg2):
    with Timer() as t:
        reports = [ab_connectivity_check(free_deg1, 5), ab_connectivity_check(free_deg2, 6)]
        # every claimed degree, including the surjectivity degree, lies in the window
        covered = all(r.rows and r.rows[-1]["claim"] == "surjective" for r in reports)
    verdict(record_criterion, 7, "abelianization connectivity ranges", all(reports) and covered, t, 60,
            ", ".join(f"iso through {r.data['iso_through']}" for r in reports))


# criterion 8 -------------------------------------------------------------
def test_unit_connectivity(record_criterion, free_deg1):
    # window tops are the smallest that certify each bound
    with Timer() as t:
        reports = [unit_connectivity_check(free_deg1, n, top) for n, top in ((0, 5), (1, 6), (2, 7))]
    verdict(record_criterion, 8, "unit-map connectivity n=0,1,2", all(reports), t, 1800,
            ", ".join(f"conn {r.data['connectivity']} vs {r.data['bound']}" for r in reports))


# criterion 9 -------------------------------------------------------------
def test_counit_layer(record_criterion):
    y = free_algebra("com", [("x", 1)])
    with Timer() as t:
        layer = counit_layer_check(y, 0, 8)
        layers = layers_check(free_algebra("ass", [("x", 1)]), 5)
    verdict(record_criterion, 9, "counit layer", layer.passed and layers.passed, t, 300,
            f"conn {layer.data['connectivity']}, {len(layers.rows)} layer degrees equal")


# criterion 10 ------------------------------------------------------------
def test_counit_exchange(record_criterion):
    y = free_algebra("com", [("x", 1)])
    with Timer() as t:
        r = counit_exchange_check(y, 1, 8)
    whole = next(row for row in r.rows if row["U"] == [] and row["V"] == [1, 2])
    verdict(record_criterion, 10, "counit exchange ingredients", r.passed, t, 600,
            f"cube coCartesian {whole['cocartesian']} vs 6")


# criterion 11 ------------------------------------------------------------
KMIN, KMAX = -1, 4


def monotone_profiles(W):
    """All profiles with KMIN <= k_U <= k_V <= KMAX for nonempty U inside V.

    Returned column-major so per-key columns are contiguous."""
    keys = sorted((V for V in subsets(W) if V), key=lambda V: (len(V), sorted(V)))
    columns = []
    for j, V in enumerate(keys):
        below = [i for i, U in enumerate(keys[:j]) if U < V]
        size = len(columns[0]) if columns else 1
        floor = np.full(size, KMIN, dtype=np.int8)
        for i in below:
            np.maximum(floor, columns[i], out=floor)
        counts = KMAX - floor + 1
        parent = np.repeat(np.arange(size, dtype=np.int32), counts)
        first = (np.cumsum(counts, dtype=np.int32) - counts)[parent]
        columns = [c[parent] for c in columns]
        columns.append((floor[parent] + (np.arange(len(parent), dtype=np.int32) - first)).astype(np.int8))
    table = np.empty((len(columns[0]), len(columns)), dtype=np.int8, order="F")
    for j, c in enumerate(columns):
        table[:, j] = c
    return keys, table


def partition_oracle(W, keys, table):
    """Minimum block sums over all partitions with at least two blocks."""
    col = {k: j for j, k in enumerate(keys)}
    best = None
    for p in multiset_partitions(list(W)):
        if len(p) < 2:
            continue
        s = sum(table[:, col[frozenset(b)]].astype(np.int32) for b in p)
        best = s if best is None else np.minimum(best, s)
    return best


def test_blakers_massey_calculators(record_criterion):
    counts, ok = {}, True
    with Timer() as t:
        for size in (1, 2, 3, 4):
            W = tuple(range(1, size + 1))
            keys, table = monotone_profiles(W)
            counts[size] = len(table)
            w_col = keys.index(frozenset(W))
            for chunk in np.array_split(table, max(1, len(table) // 1_000_000)):
                whole = chunk[:, w_col].astype(np.int32)
                if size == 1:
                    ok &= bool(np.array_equal(dual_bm_estimate_many(W, chunk, keys), whole + 2))
                    continue
                parts = partition_oracle(W, keys, chunk)
                ok &= bool(np.array_equal(bm_estimate_many(W, chunk, keys), parts - size))
                dual = np.minimum(whole + size + 1, parts + size)
                ok &= bool(np.array_equal(dual_bm_estimate_many(W, chunk, keys), dual))
                if 1 < size <= 3:
                    # per-profile functions, which also check the hypotheses
                    for row, plain, d in zip(chunk.tolist(), (parts - size).tolist(), dual.tolist()):
                        prof = dict(zip(keys, row))
                        ok &= bm_estimate(W, prof) == plain and dual_bm_estimate(W, prof) == d
        round_trip = all(uniformity_translate(uniformity_translate(Affine(1, k), "cartesian"), "cocartesian")
                         == Affine(1, k) for k in range(1, 8))
    verdict(record_criterion, 11, "Blakers-Massey calculators", ok and round_trip, t, 10,
            "profiles per |W| " + ", ".join(f"{s}:{c}" for s, c in counts.items()))


# criterion 12 ------------------------------------------------------------
def test_cube_toolkit(record_criterion, free_deg1):
    with Timer() as t:
        invariant, exact, maps = True, True, 0
        for seed in range(50):
            cube = random_cube(seed, 1 + seed % 3)
            tables = {tuple(sorted(tothofib(cube, order).homology_table().items()))
                      for order in itertools.permutations(cube.W)}
            invariant &= len(tables) == 1
            for f in cube.edges.values():
                exact &= all(les_exactness(f).values())
                maps += 1
        for cube in (unit_cube(free_deg1, 0, 5), counit_cube(free_algebra("com", [("x", 1)]), 2, 6)):
            for f in cube.edges.values():
                exact &= all(les_exactness(f).values())
                maps += 1
    verdict(record_criterion, 12, "cube toolkit", invariant and exact, t, 60, f"{maps} maps with exact sequences")


# criterion 13 ------------------------------------------------------------
def test_poisson_layer(record_criterion, poisson_deg1):
    with Timer() as t:
        reports = [en_factorization_check(poisson_deg1, k, 5) for k in (1, 2)]
        reports.append(en_connectivity_lemma_check(poisson_deg1, 2, 5))
        reports.append(en_completeness_check(poisson_deg1, 3, 5))
    verdict(record_criterion, 13, "poisson:2 layer", all(reports), t, 300,
            ", ".join(r.name for r in reports if not r.passed) or f"{len(reports)} checks")
