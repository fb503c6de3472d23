"""Graded chain complexes over Q with certified degree windows.

Grading is homological: the differential lowers degree by one.  Every
complex is zero below its window and its components are exact through the
top of the window; homology is certified one degree short of the top unless
the complex is known to vanish above it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .linalg import CoordinateSolver, Eliminator, SparseMatrix, Subspace, kernel, rank, rank_of_rows

Degree = int


class UncertifiedDegree(ValueError):
    """Raised when homology is requested outside the certified range."""


@dataclass(frozen=True)
class Connectivity:
    """Connectivity of a complex.

    ``value`` is the largest n with H_i = 0 for every i <= n.  When
    ``exact`` is False no nonzero homology was seen in the certified range
    and ``value`` is only a lower bound (printed as ``>= value``).  The zero
    complex is ``infinite``.
    """

    value: int
    exact: bool
    infinite: bool = False

    def at_least(self, k) -> Optional[bool]:
        if self.infinite or self.value >= k:
            return True
        if self.exact:
            return False
        return None

    def __str__(self) -> str:
        if self.exact:
            return str(self.value)
        return f">= {self.value}"


class ChainComplex:
    """A finite window ``[lo, hi]`` of a chain complex.

    ``labels[i]`` is an ordered basis of C_i and ``diff[i]`` the matrix of
    d_i: C_i -> C_{i-1} (rows indexed by C_{i-1}).  Degrees in the window
    with no labels are zero.
    """

    def __init__(self, lo: int, hi: int, labels: Dict[int, Sequence[Hashable]],
                 diff: Dict[int, SparseMatrix], top_exact: bool = False,
                 valid: Optional[Tuple[int, int]] = None, check: bool = True,
                 name: str = "", blocks: Optional[Dict[int, Sequence[Hashable]]] = None):
        if hi < lo:
            hi = lo - 1
        self.lo, self.hi = lo, hi
        self.labels: Dict[int, List[Hashable]] = {i: list(labels.get(i, ())) for i in range(lo, hi + 1)}
        self.diff: Dict[int, SparseMatrix] = {}
        for i in range(lo, hi + 1):
            rows = self.dim(i - 1) if i - 1 >= lo else 0
            m = diff.get(i)
            if m is None:
                m = SparseMatrix(rows, self.dim(i))
            if (m.nrows, m.ncols) != (rows, self.dim(i)):
                raise ValueError(f"d_{i} has shape {(m.nrows, m.ncols)}, expected {(rows, self.dim(i))}")
            self.diff[i] = m
        self.top_exact = top_exact
        if valid is None:
            valid = (lo, hi if top_exact else hi - 1)
        if valid[0] < lo or valid[1] > hi:
            raise ValueError("valid range must lie inside the window")
        self.valid = valid
        self.name = name
        # optional block key per basis vector; differentials never mix blocks
        self.blocks = blocks
        self._rank_cache: Dict[int, int] = {}
        if check:
            self.check_d_squared()

    # -- basic data -------------------------------------------------------
    @property
    def window(self) -> Tuple[int, int]:
        return (self.lo, self.hi)

    def dim(self, i: int) -> int:
        return len(self.labels.get(i, ()))

    def dims(self) -> Dict[int, int]:
        return {i: self.dim(i) for i in range(self.lo, self.hi + 1)}

    def d(self, i: int) -> SparseMatrix:
        if i in self.diff:
            return self.diff[i]
        return SparseMatrix(self.dim(i - 1), self.dim(i))

    def check_d_squared(self):
        for i in range(self.lo + 1, self.hi + 1):
            if not (self.d(i - 1) @ self.d(i)).is_zero():
                raise ValueError(f"d^2 != 0 at degree {i}{' in ' + self.name if self.name else ''}")

    def certified(self, i: int) -> bool:
        return i < self.lo or self.valid[0] <= i <= self.valid[1] or (self.top_exact and i > self.hi)

    def euler_characteristic(self) -> int:
        lo, hi = self.valid
        return sum((-1) ** i * self.dim(i) for i in range(lo, hi + 1))

    # -- homology ---------------------------------------------------------
    def _rank(self, i: int) -> int:
        if i <= self.lo or i > self.hi:
            return 0
        r = self._rank_cache.get(i)
        if r is None:
            if self.blocks is not None and i in self.blocks:
                groups: Dict[Hashable, list] = {}
                for c, col in enumerate(self.d(i).columns()):
                    if col:
                        groups.setdefault(self.blocks[i][c], []).append(col)
                r = sum(rank_of_rows(g) for g in groups.values())
            else:
                r = rank(self.d(i))
            self._rank_cache[i] = r
        return r

    def betti(self, i: int, certified_only: bool = True) -> int:
        if certified_only and not self.certified(i):
            raise UncertifiedDegree(f"degree {i} outside certified range {self.valid}")
        if i < self.lo or i > self.hi:
            return 0
        return self.dim(i) - self._rank(i) - self._rank(i + 1)

    def homology(self, i: int, certified_only: bool = True) -> Tuple[int, List[Dict[int, Fraction]]]:
        """Dimension of H_i and cycle vectors representing a basis."""
        if certified_only and not self.certified(i):
            raise UncertifiedDegree(f"degree {i} outside certified range {self.valid}")
        if i < self.lo or i > self.hi:
            return 0, []
        z = self.cycles(i)
        b = self.boundaries(i)
        reps = z.quotient_basis(b)
        return len(reps), reps

    def cycles(self, i: int) -> Subspace:
        if i <= self.lo:
            return Subspace(self.dim(i), [{j: Fraction(1)} for j in range(self.dim(i))])
        return kernel(self.d(i))

    def boundaries(self, i: int) -> Subspace:
        if i + 1 > self.hi:
            return Subspace(self.dim(i), [])
        return Subspace(self.dim(i), [c for c in self.d(i + 1).columns() if c])

    def homology_table(self, degrees: Optional[Iterable[int]] = None) -> Dict[int, int]:
        if degrees is None:
            degrees = range(self.valid[0], self.valid[1] + 1)
        return {i: self.betti(i) for i in degrees}

    def connectivity(self) -> Connectivity:
        lo, hi = self.valid
        if all(self.dim(i) == 0 for i in range(self.lo, self.hi + 1)) and self.top_exact:
            return Connectivity(hi, False, infinite=True)
        for i in range(self.lo, hi + 1):
            if i < lo:
                return Connectivity(i - 1, False)
            if self.betti(i):
                return Connectivity(i - 1, True)
        if self.top_exact:
            return Connectivity(hi, False, infinite=True)
        return Connectivity(hi, False)

    def restrict(self, hi: int) -> "ChainComplex":
        """Brutal truncation to degrees <= hi (components stay exact)."""
        hi = min(hi, self.hi)
        return ChainComplex(self.lo, hi, {i: self.labels[i] for i in range(self.lo, hi + 1)},
                            {i: self.diff[i] for i in range(self.lo, hi + 1)},
                            top_exact=self.top_exact and hi == self.hi, check=False, name=self.name,
                            blocks=None if self.blocks is None else {i: self.blocks[i] for i in range(self.lo, hi + 1) if i in self.blocks})

    @classmethod
    def zero(cls, lo: int = 0, hi: int = 0) -> "ChainComplex":
        return cls(lo, hi, {}, {}, top_exact=True)

    @classmethod
    def from_dims(cls, dims: Dict[int, int], diff: Optional[Dict[int, Sequence[Sequence]]] = None,
                  top_exact: bool = True, lo: Optional[int] = None, hi: Optional[int] = None) -> "ChainComplex":
        """Small complexes given by dimensions and dense differential matrices."""
        lo = min(dims) if lo is None else lo
        hi = max(dims) if hi is None else hi
        labels = {i: list(range(n)) for i, n in dims.items()}
        mats = {}
        for i, m in (diff or {}).items():
            sm = SparseMatrix.from_dense(m) if m else SparseMatrix(dims.get(i - 1, 0), dims.get(i, 0))
            if not m:
                sm = SparseMatrix(dims.get(i - 1, 0), dims.get(i, 0))
            mats[i] = sm
        return cls(lo, hi, labels, mats, top_exact=top_exact)

    def to_dict(self) -> dict:
        """Plain data: window, certified range and sparse differentials with exact entries."""
        return {
            "window": [self.lo, self.hi], "valid": list(self.valid), "top_exact": self.top_exact,
            "dims": {str(i): self.dim(i) for i in range(self.lo, self.hi + 1)},
            "differential": {str(i): [[r, c, str(v)] for (r, c), v in sorted(self.diff[i].entries.items())]
                             for i in range(self.lo + 1, self.hi + 1) if i in self.diff and self.diff[i].entries},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChainComplex":
        lo, hi = data["window"]
        dims = {int(i): n for i, n in data["dims"].items()}
        mats = {}
        for i in range(lo + 1, hi + 1):
            ent = {(r, c): Fraction(v) for r, c, v in data.get("differential", {}).get(str(i), [])}
            mats[i] = SparseMatrix(dims.get(i - 1, 0), dims.get(i, 0), ent)
        valid = tuple(data["valid"]) if "valid" in data else None
        return cls(lo, hi, {i: list(range(n)) for i, n in dims.items()}, mats,
                   top_exact=bool(data.get("top_exact", False)), valid=valid)

    def __repr__(self) -> str:
        dims = ", ".join(f"{i}:{self.dim(i)}" for i in range(self.lo, self.hi + 1) if self.dim(i))
        return f"ChainComplex([{self.lo},{self.hi}] {{{dims}}}{' ' + self.name if self.name else ''})"


class ChainMap:
    """Degreewise matrices ``blocks[i]: source_i -> target_i``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, blocks: Dict[int, SparseMatrix],
                 check: bool = True):
        self.source, self.target = source, target
        self.blocks: Dict[int, SparseMatrix] = {}
        lo = min(source.lo, target.lo)
        hi = min(source.hi, target.hi)
        self.lo, self.hi = lo, hi
        for i in range(lo, hi + 1):
            m = blocks.get(i)
            shape = (target.dim(i), source.dim(i))
            if m is None:
                m = SparseMatrix(*shape)
            if (m.nrows, m.ncols) != shape:
                raise ValueError(f"block {i} has shape {(m.nrows, m.ncols)}, expected {shape}")
            self.blocks[i] = m
        if check:
            self.check()

    def block(self, i: int) -> SparseMatrix:
        if i in self.blocks:
            return self.blocks[i]
        return SparseMatrix(self.target.dim(i), self.source.dim(i))

    def check(self):
        for i in range(self.lo + 1, self.hi + 1):
            left = self.target.d(i) @ self.block(i)
            right = self.block(i - 1) @ self.source.d(i)
            if left != right:
                raise ValueError(f"map does not commute with differentials in degree {i}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return ChainMap(other.source.restrict(hi), self.target.restrict(hi),
                        {i: self.block(i) @ other.block(i) for i in range(lo, hi + 1)}, check=False)

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {i: SparseMatrix(c.dim(i), c.dim(i), {(j, j): 1 for j in range(c.dim(i))})
                          for i in range(c.lo, c.hi + 1)})

    @classmethod
    def zero(cls, s: ChainComplex, t: ChainComplex) -> "ChainMap":
        return cls(s, t, {}, check=False)

    def induced_matrix(self, i: int) -> Tuple[int, int, List[Dict[int, Fraction]]]:
        """Matrix of H_i(f) in cycle-representative bases: (dim source, dim target, columns)."""
        a, src = self.source.homology(i)
        b, tgt = self.target.homology(i)
        bnd = self.target.boundaries(i).basis
        solver = CoordinateSolver(list(bnd) + list(tgt))
        cols = []
        m = self.block(i)
        for z in src:
            img = m.apply(z)
            coords = solver.solve(img)
            if coords is None:
                raise ValueError("image of a cycle is not a cycle")
            cols.append({k - len(bnd): v for k, v in coords.items() if k >= len(bnd)})
        return a, b, cols

    def homology_rank(self, i: int) -> int:
        a, b, cols = self.induced_matrix(i)
        return rank(SparseMatrix.from_columns(b, cols))

    def is_iso_on(self, i: int) -> bool:
        a, b, cols = self.induced_matrix(i)
        return a == b and rank(SparseMatrix.from_columns(b, cols)) == a

    def is_surjective_on(self, i: int) -> bool:
        a, b, cols = self.induced_matrix(i)
        return rank(SparseMatrix.from_columns(b, cols)) == b


def _joint_top(parts) -> int:
    """Top of a window built from shifted pieces; exact pieces never cut it."""
    cut = [c.hi + k for c, k in parts if not c.top_exact]
    if cut:
        return min(cut)
    return max(c.hi + k for c, k in parts)


def _block_matrix(row_offsets, col_offsets, nrows, ncols, blocks) -> SparseMatrix:
    ent = {}
    for (bi, bj), m in blocks.items():
        if m is None:
            continue
        ro, co = row_offsets[bi], col_offsets[bj]
        for (r, c), v in m.entries.items():
            ent[(ro + r, co + c)] = ent.get((ro + r, co + c), 0) + v
    return SparseMatrix(nrows, ncols, ent)


def _neg(m: SparseMatrix) -> SparseMatrix:
    return SparseMatrix(m.nrows, m.ncols, {k: -v for k, v in m.entries.items()})


def cocone(f: ChainMap) -> ChainComplex:
    """Mapping cocone: degree n is source_n + target_{n+1}, d(x, y) = (dx, f x - dy)."""
    s, t = f.source, f.target
    lo = min(s.lo, t.lo - 1)
    hi = _joint_top([(s, 0), (t, -1)])
    labels = {n: [("s", l) for l in s.labels.get(n, [])] + [("t", l) for l in t.labels.get(n + 1, [])]
              for n in range(lo, hi + 1)}
    diff = {}
    for n in range(lo + 1, hi + 1):
        ro = {0: 0, 1: s.dim(n - 1)}
        co = {0: 0, 1: s.dim(n)}
        blocks = {(0, 0): s.d(n) if s.lo <= n <= s.hi else None,
                  (1, 0): f.block(n) if s.lo <= n <= s.hi else None,
                  (1, 1): _neg(t.d(n + 1)) if t.lo <= n + 1 <= t.hi else None}
        diff[n] = _block_matrix(ro, co, len(labels[n - 1]), len(labels[n]), blocks)
    exact = s.top_exact and t.top_exact
    return ChainComplex(lo, hi, labels, diff, top_exact=exact, name="cocone",
                        blocks=_pair_blocks(s, t, lo, hi, 0, 1))


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: degree n is source_{n-1} + target_n, d(x, y) = (-dx, f x + dy)."""
    s, t = f.source, f.target
    lo = min(s.lo + 1, t.lo)
    hi = _joint_top([(s, 1), (t, 0)])
    labels = {n: [("s", l) for l in s.labels.get(n - 1, [])] + [("t", l) for l in t.labels.get(n, [])]
              for n in range(lo, hi + 1)}
    diff = {}
    for n in range(lo + 1, hi + 1):
        ro = {0: 0, 1: s.dim(n - 2)}
        co = {0: 0, 1: s.dim(n - 1)}
        blocks = {(0, 0): _neg(s.d(n - 1)) if s.lo <= n - 1 <= s.hi else None,
                  (1, 0): f.block(n - 1) if s.lo <= n - 1 <= s.hi else None,
                  (1, 1): t.d(n) if t.lo <= n <= t.hi else None}
        diff[n] = _block_matrix(ro, co, len(labels[n - 1]), len(labels[n]), blocks)
    return ChainComplex(lo, hi, labels, diff, top_exact=s.top_exact and t.top_exact, name="cone",
                        blocks=_pair_blocks(s, t, lo, hi, -1, 0))


def _pair_blocks(s: ChainComplex, t: ChainComplex, lo: int, hi: int, ds: int, dt: int):
    if s.blocks is None or t.blocks is None:
        return None
    out = {}
    for n in range(lo, hi + 1):
        out[n] = list(s.blocks.get(n + ds, [])) + list(t.blocks.get(n + dt, []))
    return out


def cocone_maps(f: ChainMap, g: ChainMap, sq_source: ChainMap, sq_target: ChainMap,
                cf: ChainComplex, cg: ChainComplex) -> ChainMap:
    """Map of cocones induced by a commuting square (f -> g)."""
    blocks = {}
    for n in range(max(cf.lo, cg.lo), min(cf.hi, cg.hi) + 1):
        ro = {0: 0, 1: g.source.dim(n)}
        co = {0: 0, 1: f.source.dim(n)}
        b = {(0, 0): sq_source.block(n), (1, 1): sq_target.block(n + 1)}
        blocks[n] = _block_matrix(ro, co, cg.dim(n), cf.dim(n), b)
    return ChainMap(cf, cg, blocks)


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """``c[k]``: degree n holds c_{n-k}; differentials pick up the sign (-1)^k."""
    sign = -1 if k % 2 else 1
    labels = {i + k: ls for i, ls in c.labels.items()}
    diff = {i + k: (m if sign == 1 else _neg(m)) for i, m in c.diff.items()}
    blocks = None if c.blocks is None else {i + k: b for i, b in c.blocks.items()}
    return ChainComplex(c.lo + k, c.hi + k, labels, diff, top_exact=c.top_exact,
                        valid=(c.valid[0] + k, c.valid[1] + k), check=False, name=c.name, blocks=blocks)


def tensor(a: ChainComplex, b: ChainComplex, hi: Optional[int] = None) -> ChainComplex:
    """Tensor product with d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy."""
    lo = a.lo + b.lo
    top = min(a.hi + b.lo, b.hi + a.lo)
    if a.top_exact and b.top_exact:
        top = a.hi + b.hi
    if hi is not None:
        top = min(top, hi)
    labels: Dict[int, list] = {}
    index: Dict[int, dict] = {}
    for n in range(lo, top + 1):
        ls = []
        for p in range(a.lo, a.hi + 1):
            q = n - p
            if b.lo <= q <= b.hi:
                for i, la in enumerate(a.labels[p]):
                    for j, lb in enumerate(b.labels[q]):
                        ls.append((p, i, j))
        labels[n] = ls
        index[n] = {key: k for k, key in enumerate(ls)}
    diff = {}
    for n in range(lo + 1, top + 1):
        ent = {}
        for col, (p, i, j) in enumerate(labels[n]):
            q = n - p
            if p > a.lo:
                for (r, c), v in a.d(p).entries.items():
                    if c == i:
                        key = (p - 1, r, j)
                        row = index[n - 1].get(key)
                        if row is not None:
                            ent[(row, col)] = ent.get((row, col), 0) + v
            if q > b.lo:
                sgn = -1 if p % 2 else 1
                for (r, c), v in b.d(q).entries.items():
                    if c == j:
                        key = (p, i, r)
                        row = index[n - 1].get(key)
                        if row is not None:
                            ent[(row, col)] = ent.get((row, col), 0) + sgn * v
        diff[n] = SparseMatrix(len(labels[n - 1]), len(labels[n]), ent)
    exact = a.top_exact and b.top_exact and top == a.hi + b.hi
    out = ChainComplex(lo, top, {n: [(a.labels[p][i], b.labels[n - p][j]) for (p, i, j) in labels[n]]
                                 for n in labels}, diff, top_exact=exact)
    return out


def truncate(c: ChainComplex, k: int, kind: str = "le") -> ChainComplex:
    """Homology truncation: ``kind='le'`` keeps H_i for i <= k, ``'ge'`` keeps i >= k."""
    if kind == "le":
        if k >= c.hi:
            return c
        z = c.cycles(k) if k >= c.lo else Subspace(0)
        zb = z.basis
        labels = {i: c.labels[i] for i in range(c.lo, k)}
        labels[k] = [("Z", j) for j in range(len(zb))]
        diff = {i: c.diff[i] for i in range(c.lo, k)}
        if k > c.lo:
            dk = c.d(k)
            cols = [dk.apply(v) for v in zb]
            diff[k] = SparseMatrix.from_columns(c.dim(k - 1), cols)
        return ChainComplex(c.lo, k, labels, diff, top_exact=True)
    if kind == "ge":
        if k <= c.lo:
            return c
        b = c.boundaries(k)
        full = Subspace(c.dim(k), [{j: Fraction(1)} for j in range(c.dim(k))])
        comp = full.quotient_basis(b)
        solver = CoordinateSolver(list(b.basis) + comp)
        nb = len(b.basis)
        labels = {i: c.labels[i] for i in range(k + 1, c.hi + 1)}
        labels[k] = [("Q", j) for j in range(len(comp))]
        diff = {i: c.diff[i] for i in range(k + 2, c.hi + 1)}
        if k + 1 <= c.hi:
            cols = []
            for col in c.d(k + 1).columns():
                co = solver.solve(col)
                cols.append({j - nb: v for j, v in co.items() if j >= nb})
            diff[k + 1] = SparseMatrix.from_columns(len(comp), cols)
        return ChainComplex(k, c.hi, labels, diff, top_exact=c.top_exact, valid=(k, c.valid[1]))
    raise ValueError("kind must be 'le' or 'ge'")


class MultiComplex:
    """Cells indexed by auxiliary degrees (r_1..r_m) and an internal degree.

    ``internal[(aux, n)]`` is the internal differential of the cell and
    ``directional[(j, aux, n)]`` the boundary in direction j from ``aux`` to
    ``aux - e_j``.  Directions commute with each other and with the internal
    differential; the sign decoration happens in :func:`totalize`.
    """

    def __init__(self, ndirs: int):
        self.ndirs = ndirs
        self.cells: Dict[Tuple[int, ...], Dict[int, list]] = {}
        self.internal: Dict[Tuple[Tuple[int, ...], int], SparseMatrix] = {}
        self.directional: Dict[Tuple[int, Tuple[int, ...], int], SparseMatrix] = {}

    def add_cell(self, aux: Tuple[int, ...], degree: int, labels: list):
        self.cells.setdefault(tuple(aux), {})[degree] = list(labels)

    def cell_labels(self, aux, degree) -> list:
        return self.cells.get(tuple(aux), {}).get(degree, [])


def totalize(m: MultiComplex, lo: int, hi: int, top_exact: bool = False, name: str = "") -> ChainComplex:
    """Total complex: degree = internal + sum(aux), D = sum_j (-1)^(r_1+..+r_{j-1}) d_j + (-1)^(sum r) d_int."""
    labels: Dict[int, list] = {n: [] for n in range(lo, hi + 1)}
    offsets: Dict[Tuple[Tuple[int, ...], int], int] = {}
    for aux in sorted(m.cells):
        for deg in sorted(m.cells[aux]):
            tot = deg + sum(aux)
            if lo <= tot <= hi:
                offsets[(aux, deg)] = len(labels[tot])
                labels[tot].extend((aux, l) for l in m.cells[aux][deg])
    diff: Dict[int, SparseMatrix] = {}
    ents: Dict[int, dict] = {n: {} for n in range(lo, hi + 1)}
    for (aux, deg), mat in m.internal.items():
        tot = deg + sum(aux)
        if lo < tot <= hi and (aux, deg) in offsets and (aux, deg - 1) in offsets:
            sgn = -1 if sum(aux) % 2 else 1
            ro, co = offsets[(aux, deg - 1)], offsets[(aux, deg)]
            e = ents[tot]
            for (r, c), v in mat.entries.items():
                e[(ro + r, co + c)] = e.get((ro + r, co + c), 0) + sgn * v
    for (j, aux, deg), mat in m.directional.items():
        tot = deg + sum(aux)
        tgt = tuple(a - (1 if i == j else 0) for i, a in enumerate(aux))
        if lo < tot <= hi and (aux, deg) in offsets and (tgt, deg) in offsets:
            sgn = -1 if sum(aux[:j]) % 2 else 1
            ro, co = offsets[(tgt, deg)], offsets[(aux, deg)]
            e = ents[tot]
            for (r, c), v in mat.entries.items():
                e[(ro + r, co + c)] = e.get((ro + r, co + c), 0) + sgn * v
    for n in range(lo, hi + 1):
        rows = len(labels[n - 1]) if n > lo else 0
        diff[n] = SparseMatrix(rows, len(labels[n]), ents[n] if n > lo else {})
    return ChainComplex(lo, hi, labels, diff, top_exact=top_exact, name=name)


def les_exactness(f: ChainMap, degrees: Optional[Iterable[int]] = None) -> Dict[int, bool]:
    """Check exactness of the long exact sequence of ``cocone(f) -> source -> target``.

    Returns, per degree n, whether the three spots H_n(cocone), H_n(source)
    and H_n(target) are exact.
    """
    c = cocone(f)
    proj = ChainMap(c, f.source, {n: _projection(c, f.source, n) for n in range(c.lo, c.hi + 1)}, check=False)
    if degrees is None:
        lo = max(c.valid[0], f.source.valid[0], f.target.valid[0])
        hi = min(c.valid[1], f.source.valid[1], f.target.valid[1] - 1)
        degrees = range(lo, hi + 1)
    out = {}
    for n in degrees:
        # ... H_{n+1}(T) -> H_n(C) -> H_n(S) -> H_n(T) -> H_{n-1}(C)
        hc = c.betti(n)
        hs = f.source.betti(n)
        ht = f.target.betti(n)
        r_proj = proj.homology_rank(n)
        r_f = f.homology_rank(n)
        r_f_up = f.homology_rank(n + 1)
        r_f_down = f.homology_rank(n - 1) if c.certified(n - 1) and f.source.certified(n - 1) else None
        # rank of connecting map H_n(T) -> H_{n-1}(C) = dim ker(H_{n-1} proj)
        ok_c = hc == (f.target.betti(n + 1) - r_f_up) + r_proj
        ok_s = hs - r_f == r_proj
        ok_t = True
        if r_f_down is not None:
            r_conn = c.betti(n - 1) - proj.homology_rank(n - 1)
            ok_t = ht - r_conn == r_f
        out[n] = ok_c and ok_s and ok_t
    return out


def _projection(c: ChainComplex, s: ChainComplex, n: int) -> SparseMatrix:
    ent = {}
    for k, lab in enumerate(c.labels.get(n, [])):
        if lab[0] == "s":
            if k < s.dim(n):
                ent[(k, k)] = 1
    return SparseMatrix(s.dim(n), c.dim(n), ent)
