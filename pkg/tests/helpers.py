"""Random strictly commuting cubes for property tests.

A cube is a direct sum of pieces.  Piece j is a small complex D_j placed at
every vertex of an interval [L_j, U_j] of subsets; an edge inside the
interval acts on D_j by a nonzero scalar attached to its direction, an edge
leaving the interval is zero.  Convexity of intervals makes every square
commute.
"""

import random

from opkoszul.complexes import ChainComplex, ChainMap
from opkoszul.cubes import CubeDiagram, subsets
from opkoszul.linalg import SparseMatrix

LO, HI = -1, 4


def _piece(rng):
    d = rng.randint(0, 2)
    if rng.random() < 0.5:
        return {d: 1}, {}
    a, b = rng.randint(1, 2), rng.randint(1, 2)
    m = [[rng.randint(-1, 1) for _ in range(a)] for _ in range(b)]
    return {d: b, d + 1: a}, {d + 1: m}


def random_cube(seed: int, size: int) -> CubeDiagram:
    rng = random.Random(seed)
    W = tuple(range(1, size + 1))
    pieces = []
    for _ in range(rng.randint(1, 3)):
        dims, diff = _piece(rng)
        L = frozenset(w for w in W if rng.random() < 0.3)
        U = L | frozenset(w for w in W if rng.random() < 0.7)
        scal = {w: rng.choice([1, 2, -1, 3]) for w in W}
        pieces.append((dims, diff, L, U, scal))

    def vertex(T):
        labels, offset, diff = {n: [] for n in range(LO, HI + 1)}, {}, {}
        for j, (dims, d, L, U, _) in enumerate(pieces):
            if L <= T <= U:
                for n, k in dims.items():
                    offset[(j, n)] = len(labels[n])
                    labels[n] += [(j, i) for i in range(k)]
        for n in range(LO + 1, HI + 1):
            ent = {}
            for j, (dims, d, L, U, _) in enumerate(pieces):
                if (j, n) in offset and n in d:
                    for r, row in enumerate(d[n]):
                        for c, v in enumerate(row):
                            if v:
                                ent[(offset[(j, n - 1)] + r, offset[(j, n)] + c)] = v
            diff[n] = SparseMatrix(len(labels[n - 1]), len(labels[n]), ent)
        return ChainComplex(LO, HI, labels, diff, top_exact=True), offset

    built = {T: vertex(T) for T in subsets(W)}
    edges = {}
    for T in subsets(W):
        for w in W:
            if w in T:
                continue
            (src, so), (tgt, to) = built[T], built[T | {w}]
            blocks = {}
            for n in range(LO, HI + 1):
                ent = {}
                for (j, m), o in so.items():
                    if m == n and (j, n) in to:
                        c = pieces[j][4][w]
                        for i in range(pieces[j][0][n]):
                            ent[(to[(j, n)] + i, o + i)] = c
                blocks[n] = SparseMatrix(tgt.dim(n), src.dim(n), ent)
            edges[(T, w)] = ChainMap(src, tgt, blocks)
    return CubeDiagram(W, {T: v for T, (v, _) in built.items()}, edges)
