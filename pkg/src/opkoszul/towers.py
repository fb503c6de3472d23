"""Commutator cofiltration towers, their limits, and the checks built on them.

Stage k of the tower of an algebra x over Ass (or a Poisson operad P_n) is
``|Bar(O^{<=k}, O, x)|``; stage maps come from the quotients
``O^{<=k+1} -> O^{<=k}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .algebras import AlgebraPresentation, tag_of
from .bar import (BarComplex, algebra_complex, inclusion_of_algebra, level_map, module,
                  truncated)
from .complexes import ChainComplex, ChainMap, Connectivity, cocone, les_exactness
from .linalg import SparseMatrix, Subspace, rank
from .reports import Report


def _tag(x: AlgebraPresentation) -> str:
    return tag_of(x.kind)


def _window_kwargs(top: Optional[int], weights: Optional[Sequence[int]]):
    if (top is None) == (weights is None):
        raise ValueError("give exactly one of a degree window top or a set of weights")
    return {"top": top, "weights": weights}


def piece_bar(x: AlgebraPresentation, k: int, piece: str, top: Optional[int] = None,
              weights: Optional[Sequence[int]] = None) -> BarComplex:
    """``|Bar(O^{piece k}, O, x)|`` with O the operad of x; piece is le, eq or gt."""
    t = _tag(x)
    return BarComplex([(truncated(t, k, piece), x.kind)], x, **_window_kwargs(top, weights))


@dataclass
class Tower:
    """Stages ``C_0 <- C_1 <- ... <- C_N``; ``maps[k]`` goes from stage k+1 to stage k."""

    stages: List[ChainComplex]
    maps: List[ChainMap]
    label: str = "custom"
    bars: List[BarComplex] = field(default_factory=list)

    def homology_tower(self, degree: int) -> "TowerOfSpaces":
        dims = [c.betti(degree) for c in self.stages]
        mats = []
        for f in self.maps:
            a, b, cols = f.induced_matrix(degree)
            mats.append(SparseMatrix.from_columns(b, cols))
        return TowerOfSpaces(dims, mats)

    @classmethod
    def constant(cls, c: ChainComplex, length: int) -> "Tower":
        return cls([c] * (length + 1), [ChainMap.identity(c)] * length, label="constant")


@dataclass
class TowerOfSpaces:
    """Finite tower of vector spaces; ``maps[k]`` is a dims[k] x dims[k+1] matrix."""

    dims: List[int]
    maps: List[SparseMatrix]

    def composite(self, j: int, k: int) -> SparseMatrix:
        """The map level j -> level k for j >= k."""
        m = SparseMatrix(self.dims[j], self.dims[j], {(i, i): 1 for i in range(self.dims[j])})
        for s in range(j - 1, k - 1, -1):
            m = self.maps[s] @ m
        return m

    def image(self, j: int, k: int) -> Subspace:
        return Subspace(self.dims[k], [c for c in self.composite(j, k).columns() if c])


@dataclass
class LimResult:
    lim: Optional[int]
    lim1: Optional[int]
    stabilized: bool
    stable_images: List[int]
    constant_from: Optional[int]
    note: str = ""


def lim_lim1(t: TowerOfSpaces) -> LimResult:
    """Limit and lim^1 of a finite window of a tower.

    Mittag-Leffler is certified when, at every level below the last two,
    the images from the two deepest levels agree; then lim^1 = 0.  The limit
    is reported when the tower is eventually constant inside the window, or
    when every stable image vanishes.
    """
    N = len(t.dims) - 1
    if N < 2:
        return LimResult(None, None, False, [], None, "window too short to certify stabilization")
    stable = [t.image(N, k) for k in range(N - 1)]
    ml = all(t.image(N - 1, k) == stable[k] for k in range(N - 1))
    constant_from = None
    for K in range(N - 1, -1, -1):
        m = t.maps[K]
        if t.dims[K] == t.dims[K + 1] and rank(m) == t.dims[K]:
            constant_from = K
        else:
            break
    sdims = [s.dim for s in stable]
    if ml:
        if constant_from is not None:
            return LimResult(t.dims[N], 0, True, sdims, constant_from)
        if all(d == 0 for d in sdims):
            return LimResult(0, 0, True, sdims, None)
        return LimResult(None, 0, True, sdims, None, "stable images found but no constant tail in window")
    # no certificate: cokernel of v -> (v_k - f(v_{k+1})) on the truncation only
    rows = sum(t.dims[:N])
    cols = sum(t.dims)
    alpha = _difference_map(t, rows, cols)
    coker = rows - rank(alpha)
    return LimResult(None, coker, False, sdims, constant_from,
                     "indeterminate beyond window; lim^1 is the cokernel on the truncation")


def _difference_map(t: TowerOfSpaces, rows: int, cols: int) -> SparseMatrix:
    ro = [sum(t.dims[:k]) for k in range(len(t.dims))]
    ent = {}
    for k in range(len(t.dims) - 1):
        for i in range(t.dims[k]):
            ent[(ro[k] + i, ro[k] + i)] = 1
        for (r, c), v in t.maps[k].entries.items():
            key = (ro[k] + r, ro[k + 1] + c)
            ent[key] = ent.get(key, 0) - v
    return SparseMatrix(rows, cols, ent)


# --------------------------------------------------------------- the tower
def nc_tower(x: AlgebraPresentation, N: int, top: Optional[int] = None,
             weights: Optional[Sequence[int]] = None) -> Tower:
    """Stages ``|Bar(O^{<=k}, O, x)|`` for k = 0..N with the quotient maps."""
    bars = [piece_bar(x, k, "le", top, weights) for k in range(N + 1)]
    maps = [level_map(bars[k + 1], bars[k]) for k in range(N)]
    return Tower([b.complex for b in bars], maps, label=f"commutator tower of {x.name or 'x'}", bars=bars)


def stage_comparison_maps(x: AlgebraPresentation, tower: Tower, top: Optional[int] = None,
                          weights: Optional[Sequence[int]] = None) -> List[ChainMap]:
    """The maps ``x -> stage k`` (unit trees)."""
    xc = algebra_complex(x, top=top, weights=weights)
    return [inclusion_of_algebra(xc, b) for b in tower.bars]


def completeness_check(x: AlgebraPresentation, N: int, top: int) -> Report:
    """H_i(x) -> H_i(stage k) is an isomorphism for i <= k, and every
    degreewise homology tower is eventually constant with lim^1 = 0."""
    tower = nc_tower(x, N, top=top)
    comps = stage_comparison_maps(x, tower, top=top)
    rows, ok = [], True
    hi = min(c.valid[1] for c in tower.stages)
    for k, f in enumerate(comps):
        for i in range(0, min(k, hi) + 1):
            iso = f.is_iso_on(i)
            ok &= iso
            rows.append({"stage": k, "degree": i, "iso": iso})
    limits = {}
    xc = comps[0].source
    for i in range(0, hi + 1):
        res = lim_lim1(tower.homology_tower(i))
        hx = xc.betti(i)
        good = res.stabilized and res.lim1 == 0 and res.lim == hx
        if i + 1 <= N:
            ok &= good
        limits[i] = {"lim": res.lim, "lim1": res.lim1, "H(x)": hx, "stabilized": res.stabilized,
                     "constant_from": res.constant_from}
    return Report("completeness", ok, rows, [f"certified through degree {hi}",
                                            "limits are asserted for degrees i < N only"],
                  {"limits": limits})


# ------------------------------------------------------------ fiber sequence
def _into_cocone(i: ChainMap, p: ChainMap) -> ChainMap:
    """``F -> cocone(p)`` sending f to (i f, 0)."""
    c = cocone(p)
    F = i.source
    blocks = {}
    for n in range(max(c.lo, F.lo), min(c.hi, F.hi) + 1):
        m = i.block(n)
        blocks[n] = SparseMatrix(c.dim(n), F.dim(n), dict(m.entries))
    return ChainMap(F, c, blocks)


def fiber_sequence_check(x: AlgebraPresentation, n: int, top: Optional[int] = None,
                         weights: Optional[Sequence[int]] = None) -> Report:
    """``Bar(O^{=n}) -> Bar(O^{<=n}) -> Bar(O^{<=n-1})`` is a fiber sequence.

    Verified as: the composite vanishes, the fiber maps quasi-isomorphically
    onto the cocone of the quotient map, and the long exact sequence of that
    quotient map is exact degree by degree.
    """
    F = piece_bar(x, n, "eq", top, weights)
    E = piece_bar(x, n, "le", top, weights)
    i = level_map(F, E)
    rows, ok = [], True
    if n == 0:
        for d in range(F.complex.valid[0], F.complex.valid[1] + 1):
            iso = i.is_iso_on(d)
            ok &= iso
            rows.append({"degree": d, "H(fiber)": F.complex.betti(d), "H(total)": E.complex.betti(d),
                         "exact": iso})
        return Report(f"fiber sequence n=0", ok, rows, ["base stage is zero: the inclusion must be an isomorphism"])
    B = piece_bar(x, n - 1, "le", top, weights)
    p = level_map(E, B)
    comp = p.compose(i)
    if any(not comp.block(d).is_zero() for d in range(comp.lo, comp.hi + 1)):
        return Report(f"fiber sequence n={n}", False, [], ["composite fiber -> base is nonzero"])
    j = _into_cocone(i, p)
    les = les_exactness(p)
    lo = max(F.complex.valid[0], j.target.valid[0])
    hi = min(F.complex.valid[1], j.target.valid[1])
    for d in range(lo, hi + 1):
        iso = j.is_iso_on(d)
        ex = les.get(d, True)
        ok &= iso and ex
        rows.append({"degree": d, "H(fiber)": F.complex.betti(d), "H(total)": E.complex.betti(d),
                     "H(base)": B.complex.betti(d) if B.complex.certified(d) else None,
                     "fiber~cocone": iso, "exact": ex})
    return Report(f"fiber sequence n={n}", ok, rows, [f"certified degrees {lo}..{hi}"])


# ------------------------------------------------------------- factorization
def factorization_check(x: AlgebraPresentation, n: int, top: Optional[int] = None,
                        weights: Optional[Sequence[int]] = None) -> Report:
    """``O^{=n} o^L_O x`` against ``O^{=n} o^L_Com (Com o^L_O x)``, the right
    side as a two-direction bar complex."""
    t = _tag(x)
    left = BarComplex([(truncated(t, n, "eq"), x.kind)], x, **_window_kwargs(top, weights))
    right = BarComplex([(truncated(t, n, "eq"), "C"), (module("com"), x.kind)], x,
                       **_window_kwargs(top, weights))
    lc, rc = left.complex, right.complex
    lo = max(lc.valid[0], rc.valid[0])
    hi = min(lc.valid[1], rc.valid[1])
    rows, ok = [], True
    for d in range(lo, hi + 1):
        a, b = lc.betti(d), rc.betti(d)
        ok &= a == b
        rows.append({"degree": d, "direct": a, "through Com": b, "equal": a == b})
    return Report(f"factorization n={n}", ok, rows, [f"certified degrees {lo}..{hi}"])


# ------------------------------------------------------ abelianization ranges
RANGE_NOTE = ("statement lists surjectivity at 2n+1, inside the isomorphism range; "
              "the check uses surjectivity at 2n+2, the degree its argument produces")


def ab_connectivity_check(x: AlgebraPresentation, top: int, iso_range=None) -> Report:
    """Compare x with its derived abelianization.

    With n = conn(x): conn(Ab x) must equal n, and ``H_k(x) -> H_k(Ab x)``
    must be an isomorphism for k <= iso_range(n) and surjective at
    iso_range(n) + 1.  The default range is 2n+1 (associative case).
    """
    default_range = iso_range is None
    if default_range:
        iso_range = lambda n: 2 * n + 1
    xb = algebra_complex(x, top=top)
    ab = BarComplex([(module("com"), x.kind)], x, top=top)
    f = inclusion_of_algebra(xb, ab)
    cx, ca = xb.complex.connectivity(), ab.complex.connectivity()
    if not cx.exact and not cx.infinite:
        return Report("abelianization connectivity", True, [],
                      [f"x has no homology through degree {cx.value}: vacuous in this window"],
                      {"conn_x": str(cx), "conn_ab": str(ca)})
    if cx.infinite:
        return Report("abelianization connectivity", True, [], ["x is acyclic: vacuous"],
                      {"conn_x": "inf", "conn_ab": str(ca)})
    n = cx.value
    ok = ca.value == n and ca.exact
    rows = []
    hi = min(xb.complex.valid[1], ab.complex.valid[1])
    for k in range(0, hi + 1):
        if k <= iso_range(n):
            good = f.is_iso_on(k)
            rows.append({"degree": k, "claim": "iso", "holds": good})
        elif k == iso_range(n) + 1:
            good = f.is_surjective_on(k)
            rows.append({"degree": k, "claim": "surjective", "holds": good})
        else:
            continue
        ok &= good
    notes = [f"certified through degree {hi}"]
    if default_range:
        notes.append(RANGE_NOTE)
    return Report("abelianization connectivity", ok, rows, notes,
                  {"conn_x": n, "conn_ab": str(ca), "iso_through": iso_range(n)})


def map_connectivity_check(f: ChainMap, ab_f: ChainMap) -> Report:
    """A map is n-connected iff its abelianization is: compare cocone connectivities."""
    cf, ca = cocone(f).connectivity(), cocone(ab_f).connectivity()
    ok = (cf.infinite and ca.infinite) or (cf.value == ca.value and cf.exact == ca.exact)
    return Report("map abelianization connectivity", ok, [],
                  [], {"conn_cocone_f": "inf" if cf.infinite else str(cf),
                       "conn_cocone_ab_f": "inf" if ca.infinite else str(ca)})


def connectivity_lemma_check(x: AlgebraPresentation, kmax: int, top: int) -> Report:
    """conn(<=k) >= 0, conn(=k) >= k, conn(>k) >= k+1 for k <= kmax."""
    rows, ok = [], True
    for k in range(kmax + 1):
        for piece, bound in (("le", 0), ("eq", k), ("gt", k + 1)):
            c = piece_bar(x, k, piece, top=top).complex.connectivity()
            good = c.at_least(bound)
            if good is None:   # no homology seen in window: the bound holds there
                good = True
            ok &= good
            rows.append({"k": k, "piece": piece, "conn": "inf" if c.infinite else str(c),
                         "bound": bound, "holds": good})
    return Report("connectivity lemma", ok, rows, [f"window top {top}"])
