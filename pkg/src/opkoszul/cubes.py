"""Cubical diagrams of chain complexes and the connectivity calculus around them.

Vertices are indexed by frozensets of a finite index set W; an edge is the
map ``X_U -> X_{U + w}``.  Total homotopy fibers and cofibers are iterated
cocones and cones.  Homotopy limits over finite posets use the
Bousfield-Kan complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from more_itertools import set_partitions

from .complexes import ChainComplex, ChainMap, Connectivity, _block_matrix, cocone, cocone_maps, cone
from .linalg import SparseMatrix

Subset = FrozenSet[Hashable]


def subsets(W: Iterable) -> List[Subset]:
    W = list(W)
    return [frozenset(c) for r in range(len(W) + 1) for c in itertools.combinations(W, r)]


class CubeDiagram:
    """A strictly commuting W-cube of chain complexes."""

    def __init__(self, W: Sequence[Hashable], vertices: Dict[Subset, ChainComplex],
                 edges: Dict[Tuple[Subset, Hashable], ChainMap], check: bool = True):
        self.W = tuple(W)
        if len(self.W) > 4:
            raise ValueError("cubes are limited to |W| <= 4")
        self.vertices = {frozenset(k): v for k, v in vertices.items()}
        self.edges = {(frozenset(k), w): f for (k, w), f in edges.items()}
        for U in subsets(self.W):
            if U not in self.vertices:
                raise ValueError(f"missing vertex {sorted(U)}")
            for w in self.W:
                if w not in U and (U, w) not in self.edges:
                    raise ValueError(f"missing edge {sorted(U)} + {w}")
        if check:
            self.validate()

    def edge(self, U: Subset, w) -> ChainMap:
        return self.edges[(frozenset(U), w)]

    def validate(self):
        for U in subsets(self.W):
            for a, b in itertools.combinations([w for w in self.W if w not in U], 2):
                p = self.edge(U | {a}, b).compose(self.edge(U, a))
                q = self.edge(U | {b}, a).compose(self.edge(U, b))
                for n in range(max(p.lo, q.lo), min(p.hi, q.hi) + 1):
                    if p.block(n) != q.block(n):
                        raise ValueError(f"square at {sorted(U)} with {a},{b} does not commute in degree {n}")
        return True

    @property
    def dimension(self) -> int:
        return len(self.W)

    def __repr__(self) -> str:
        return f"CubeDiagram(W={list(self.W)})"


def face(x: CubeDiagram, U: Iterable, V: Iterable) -> CubeDiagram:
    """The (V-U)-cube T -> X_{T + U}."""
    U, V = frozenset(U), frozenset(V)
    if not U <= V or not V <= frozenset(x.W):
        raise ValueError("a face needs U contained in V contained in W")
    D = [w for w in x.W if w in V - U]
    verts = {T: x.vertices[T | U] for T in subsets(D)}
    edges = {(T, w): x.edge(T | U, w) for T in subsets(D) for w in D if w not in T}
    return CubeDiagram(D, verts, edges, check=False)


def all_faces(x: CubeDiagram, dim: Optional[int] = None) -> List[Tuple[Subset, Subset]]:
    out = []
    for V in subsets(x.W):
        for U in subsets(V):
            if dim is None or len(V - U) == dim:
                out.append((U, V))
    return out


def one_cube(f: ChainMap, w="1") -> CubeDiagram:
    e = frozenset()
    return CubeDiagram([w], {e: f.source, frozenset([w]): f.target}, {(e, w): f}, check=False)


# ------------------------------------------------------------- total fibers
def _cone_maps(f: ChainMap, g: ChainMap, sq_source: ChainMap, sq_target: ChainMap,
               cf: ChainComplex, cg: ChainComplex) -> ChainMap:
    blocks = {}
    for n in range(max(cf.lo, cg.lo), min(cf.hi, cg.hi) + 1):
        ro = {0: 0, 1: g.source.dim(n - 1)}
        co = {0: 0, 1: f.source.dim(n - 1)}
        b = {(0, 0): sq_source.block(n - 1), (1, 1): sq_target.block(n)}
        blocks[n] = _block_matrix(ro, co, cg.dim(n), cf.dim(n), b)
    return ChainMap(cf, cg, blocks, check=False)


def _collapse(x: CubeDiagram, w, fiber: bool) -> CubeDiagram:
    """Take cocones (or cones) in direction w, giving a (W - w)-cube."""
    rest = [v for v in x.W if v != w]
    make = cocone if fiber else cone
    lift = cocone_maps if fiber else _cone_maps
    verts = {}
    for T in subsets(rest):
        verts[T] = make(x.edge(T, w))
    edges = {}
    for T in subsets(rest):
        for a in rest:
            if a in T:
                continue
            f, g = x.edge(T, w), x.edge(T | {a}, w)
            m = lift(f, g, x.edge(T, a), x.edge(T | {w}, a), verts[T], verts[T | {a}])
            edges[(T, a)] = m
    return CubeDiagram(rest, verts, edges, check=False)


def tothofib(x: CubeDiagram, order: Optional[Sequence] = None) -> ChainComplex:
    """Total homotopy fiber as iterated cocones along ``order`` (default: W)."""
    order = list(x.W if order is None else order)
    cur = x
    for w in order:
        cur = _collapse(cur, w, fiber=True)
    return cur.vertices[frozenset()]


def tothocofib(x: CubeDiagram, order: Optional[Sequence] = None) -> ChainComplex:
    """Total homotopy cofiber as iterated cones; the result sits at the top vertex."""
    order = list(x.W if order is None else order)
    cur = x
    for w in order:
        cur = _collapse(cur, w, fiber=False)
    return cur.vertices[frozenset()]


@dataclass(frozen=True)
class Degree:
    """Extended integer for Cartesian degrees; ``exact`` False means a lower bound."""

    value: int
    exact: bool
    infinite: bool = False

    def at_least(self, k) -> Optional[bool]:
        if self.infinite or self.value >= k:
            return True
        return False if self.exact else None

    def __str__(self) -> str:
        if self.infinite:
            return "inf"
        return str(self.value) if self.exact else f">= {self.value}"


def _degree(c: Connectivity, shift: int) -> Degree:
    return Degree(c.value + shift, c.exact, c.infinite)


def cartesian_degree(x: CubeDiagram) -> Degree:
    return _degree(tothofib(x).connectivity(), 1)


def cocartesian_degree(x: CubeDiagram) -> Degree:
    return _degree(tothocofib(x).connectivity(), 0)


# ------------------------------------------------------------ BM calculators
Profile = Dict[Subset, int]


def admissible_partitions(W: Sequence) -> List[List[Subset]]:
    """Partitions of W into nonempty blocks other than the one-block partition."""
    W = list(W)
    out = []
    for p in set_partitions(W):
        if len(p) > 1 or len(W) == 0:
            out.append([frozenset(b) for b in p])
    return out


def check_profile(W: Sequence, profile: Profile, need_whole: bool = True):
    """Hypothesis: -1 <= k_U <= k_V for nonempty U contained in V.

    ``need_whole`` False allows k_W to be absent (the plain estimate never reads it).
    """
    W = frozenset(W)
    keys = [V for V in subsets(W) if V and (need_whole or V != W or V in profile)]
    for V in keys:
        if V not in profile:
            raise ValueError(f"profile misses the subset {sorted(V)}")
        if profile[V] < -1:
            raise ValueError(f"k_{sorted(V)} = {profile[V]} is below -1")
    for U in keys:
        for V in keys:
            if U < V and profile[U] > profile[V]:
                raise ValueError(f"profile is not monotone: k_{sorted(U)} > k_{sorted(V)}")


def bm_estimate(W: Sequence, profile: Profile, check: bool = True) -> int:
    """min over admissible partitions of ``-|W| + sum k_V``."""
    if check:
        check_profile(W, profile, need_whole=False)
    parts = admissible_partitions(W)
    if not parts:
        raise ValueError("no admissible partition: |W| must be at least 2")
    return min(-len(W) + sum(profile[frozenset(b)] for b in p) for p in parts)


def dual_bm_estimate(W: Sequence, profile: Profile, check: bool = True) -> int:
    """min of ``k_W + |W| + 1`` and ``|W| + sum k_V`` over admissible partitions."""
    if check:
        check_profile(W, profile)
    n = len(W)
    best = profile[frozenset(W)] + n + 1
    for p in admissible_partitions(W):
        best = min(best, n + sum(profile[frozenset(b)] for b in p))
    return best


def _block_sums(W: Sequence, table, keys: Sequence[Subset]):
    """Row-wise minimum over admissible partitions of the block sums."""
    col = {k: j for j, k in enumerate(keys)}
    columns: Dict[Subset, np.ndarray] = {}

    def column(b):
        if b not in columns:
            columns[b] = np.ascontiguousarray(table[:, col[b]], dtype=np.int32)
        return columns[b]

    best = None
    for p in admissible_partitions(W):
        s = column(p[0]).copy()
        for b in p[1:]:
            s += column(b)
        best = s if best is None else np.minimum(best, s, out=best)
    return best


def bm_estimate_many(W: Sequence, table, keys: Sequence[Subset]):
    """Vectorized plain estimate: ``table[p, j]`` is k of ``keys[j]`` in profile p.
    Hypotheses are not checked."""
    if len(W) < 2:
        raise ValueError("no admissible partition: |W| must be at least 2")
    return _block_sums(W, np.asarray(table), keys) - len(W)


def dual_bm_estimate_many(W: Sequence, table, keys: Sequence[Subset]):
    """Vectorized dual estimate, same layout as :func:`bm_estimate_many`."""
    table = np.asarray(table)
    n = len(W)
    whole = table[:, list(keys).index(frozenset(W))].astype(np.int32) + n + 1
    if n < 2:
        return whole
    return np.minimum(whole, _block_sums(W, table, keys) + n)


@dataclass(frozen=True)
class Affine:
    """The connectivity function d -> slope * d + offset."""

    slope: int
    offset: int

    def __call__(self, d: int) -> int:
        return self.slope * d + self.offset

    def __str__(self) -> str:
        s = "id" if self.slope == 1 else f"{self.slope}id"
        return s if self.offset == 0 else f"{s}{self.offset:+d}"


def uniformity_translate(f: Affine, direction: str = "cartesian") -> Affine:
    """``(id+k)``-Cartesian <-> ``(2id+k-1)``-coCartesian for k > 0.

    ``direction`` names the kind of ``f``: "cartesian" maps to the
    coCartesian function, "cocartesian" maps back.
    """
    if direction == "cartesian":
        if f.slope != 1 or f.offset <= 0:
            raise ValueError("expects id + k with k > 0")
        return Affine(2, f.offset - 1)
    if direction == "cocartesian":
        if f.slope != 2 or f.offset + 1 <= 0:
            raise ValueError("expects 2id + k - 1 with k > 0")
        return Affine(1, f.offset + 1)
    raise ValueError("direction is 'cartesian' or 'cocartesian'")


# ------------------------------------------------------- homotopy limits
def _chains(poset: Sequence[Subset], leq) -> List[Tuple[Subset, ...]]:
    out = []

    def extend(ch):
        out.append(ch)
        for q in poset:
            if q != ch[-1] and leq(ch[-1], q):
                extend(ch + (q,))

    for p in poset:
        extend((p,))
    return out


def bk_holim(poset: Sequence[Subset], vertices: Dict[Subset, ChainComplex],
             arrow: Callable[[Subset, Subset], ChainMap],
             leq=lambda a, b: a <= b, name: str = "holim") -> Tuple[ChainComplex, List[Tuple[Subset, ...]]]:
    """Bousfield-Kan homotopy limit over a finite poset.

    Degree n is the sum over chains p_0 < .. < p_k of (X_{p_k})_{n+k}; the
    differential is the alternating face sum (the last face composes with
    the map p_{k-1} -> p_k) plus (-1)^k times the internal differential.
    """
    chains = _chains(poset, leq)
    K = max(len(c) for c in chains) - 1
    lo = min(vertices[p].lo for p in poset) - K
    cut = [vertices[p].hi for p in poset if not vertices[p].top_exact]
    exact = not cut
    hi = (min(cut) - K) if cut else max(vertices[p].hi for p in poset)
    labels: Dict[int, list] = {n: [] for n in range(lo, hi + 1)}
    pos: Dict[Tuple[tuple, int], int] = {}
    for n in range(lo, hi + 1):
        for ch in chains:
            k = len(ch) - 1
            X = vertices[ch[-1]]
            for j in range(X.dim(n + k)):
                pos[(ch, n, j)] = len(labels[n])
                labels[n].append((ch, j))
    cofaces: Dict[tuple, List[Tuple[tuple, int]]] = {}
    for tau in chains:
        for i in range(len(tau)):
            if len(tau) > 1:
                cofaces.setdefault(tau[:i] + tau[i + 1:], []).append((tau, i))
    col_cache: Dict[tuple, List[Dict[int, object]]] = {}

    def cols(key, mat):
        if key not in col_cache:
            col_cache[key] = mat.columns()
        return col_cache[key]

    diff = {}
    for n in range(lo + 1, hi + 1):
        ent: Dict[Tuple[int, int], object] = {}

        def put(r, c, v):
            nv = ent.get((r, c), 0) + v
            if nv:
                ent[(r, c)] = nv
            else:
                ent.pop((r, c), None)

        for col, (ch, j) in enumerate(labels[n]):
            k = len(ch) - 1
            X = vertices[ch[-1]]
            dg = n + k
            if X.lo < dg <= X.hi:
                sgn = -1 if k % 2 else 1
                for r, v in cols(("d", ch[-1], dg), X.d(dg))[j].items():
                    put(pos[(ch, n - 1, r)], col, sgn * v)
            for tau, i in cofaces.get(ch, ()):
                s = -1 if i % 2 else 1
                if i < k + 1:
                    if (tau, n - 1, j) in pos:
                        put(pos[(tau, n - 1, j)], col, s)
                else:
                    f = arrow(tau[-2], tau[-1])
                    if f.lo <= dg <= f.hi:
                        for r, v in cols(("f", tau[-2], tau[-1], dg), f.block(dg))[j].items():
                            if (tau, n - 1, r) in pos:
                                put(pos[(tau, n - 1, r)], col, s * v)
        diff[n] = SparseMatrix(len(labels[n - 1]), len(labels[n]), ent)
    return ChainComplex(lo, hi, labels, diff, top_exact=exact, name=name), chains


def _restriction(src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Projection of a BK complex onto the components indexed by a subposet."""
    blocks = {}
    for n in range(max(src.lo, tgt.lo), min(src.hi, tgt.hi) + 1):
        idx = {lab: i for i, lab in enumerate(src.labels.get(n, []))}
        ent = {(r, idx[lab]): 1 for r, lab in enumerate(tgt.labels.get(n, [])) if lab in idx}
        blocks[n] = SparseMatrix(tgt.dim(n), src.dim(n), ent)
    return ChainMap(src, tgt, blocks)


def _composite_arrow(punctured: Dict[Tuple[Subset, Hashable], ChainMap]):
    cache: Dict[Tuple[Subset, Subset], ChainMap] = {}

    def arrow(a: Subset, b: Subset) -> ChainMap:
        key = (a, b)
        if key not in cache:
            extra = sorted(b - a, key=str)
            f = punctured[(a, extra[0])]
            cur = a | {extra[0]}
            for w in extra[1:]:
                f = punctured[(cur, w)].compose(f)
                cur = cur | {w}
            cache[key] = f
        return cache[key]

    return arrow


def infinity_cartesian_cube(W: Sequence, vertices: Dict[Subset, ChainComplex],
                            edges: Dict[Tuple[Subset, Hashable], ChainMap]) -> CubeDiagram:
    """Complete a punctured cube (vertices for T != {}) to an infinity-Cartesian cube.

    Vertex T is the Bousfield-Kan holim over the nonempty U containing T,
    which is equivalent to X_T when T is nonempty and is the punctured-cube
    holim at T = {}.  Edges are restrictions, so the cube commutes strictly.
    """
    W = tuple(W)
    arrow = _composite_arrow({(frozenset(k), w): f for (k, w), f in edges.items()})
    nonempty = [T for T in subsets(W) if T]
    verts = {}
    for T in subsets(W):
        poset = [U for U in nonempty if T <= U]
        verts[T], _ = bk_holim(poset, vertices, arrow, name=f"holim>={sorted(T)}")
    cube_edges = {}
    for T in subsets(W):
        for w in W:
            if w not in T:
                cube_edges[(T, w)] = _restriction(verts[T], verts[T | {w}])
    return CubeDiagram(W, verts, cube_edges, check=False)


def map_into_holim(source: ChainComplex, holim: ChainComplex,
                   maps: Dict[Subset, ChainMap]) -> ChainMap:
    """``source -> holim`` given compatible maps to every vertex (length-0 chains)."""
    blocks = {}
    for n in range(max(source.lo, holim.lo), min(source.hi, holim.hi) + 1):
        ent = {}
        for r, (ch, j) in enumerate(holim.labels.get(n, [])):
            if len(ch) != 1:
                continue
            for (rr, c), v in maps[ch[0]].block(n).entries.items():
                if rr == j:
                    ent[(r, c)] = v
        blocks[n] = SparseMatrix(holim.dim(n), source.dim(n), ent)
    return ChainMap(source, holim, blocks)


def codegeneracy_cube(W: Sequence, vertex: Callable[[Subset], ChainComplex],
                      edge: Callable[[Subset, Hashable], ChainMap]) -> CubeDiagram:
    """Cube assembled from a vertex rule and an edge rule (codegeneracy maps)."""
    verts = {T: vertex(T) for T in subsets(W)}
    edges = {(T, w): edge(T, w) for T in subsets(W) for w in W if w not in T}
    return CubeDiagram(W, verts, edges)
