"""Exact sparse linear algebra over the rationals.

Vectors are plain dicts mapping an index to a nonzero ``Fraction`` (or int).
Elimination runs on primitive integer rows (fraction-free), which keeps the
arithmetic in machine-friendly Python ints; results are handed back as
``Fraction`` values.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, Fraction]


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    # fix the sign so the smallest column is positive
    if row and row[min(row)] < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _to_int_row(vec) -> Dict[int, int]:
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    for c, v in vec.items():
        if v:
            iv = v * den
            out[c] = int(iv)
    return out


class SparseMatrix:
    """Rows x cols matrix stored as ``{(row, col): value}`` with no zeros."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: Dict[Tuple[int, int], Fraction] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry {(r, c)} outside {nrows}x{ncols}")
            if v:
                self.entries[(r, c)] = Fraction(v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(nrows, ncols, ent)

    @classmethod
    def from_rows(cls, ncols: int, rows: Sequence[Vector]) -> "SparseMatrix":
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in row.items() if v}
        return cls(len(rows), ncols, ent)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Vector]) -> "SparseMatrix":
        ent = {(i, j): v for j, col in enumerate(cols) for i, v in col.items() if v}
        return cls(nrows, len(cols), ent)

    def rows(self) -> List[Vector]:
        out: List[Vector] = [{} for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def columns(self) -> List[Vector]:
        out: List[Vector] = [{} for _ in range(self.ncols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ocols = other.rows()
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in ocols[k].items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMatrix(self.nrows, other.ncols, acc)

    def apply(self, vec: Vector) -> Vector:
        """Matrix times column vector."""
        out: Vector = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


class Eliminator:
    """Incremental row echelon structure over Q.

    Rows are reduced against the current pivots as they arrive; an
    independent remainder becomes a new pivot row.  Pivot rows are kept as
    primitive integer vectors.
    """

    def __init__(self):
        self.pivots: Dict[int, Dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vec) -> Dict[int, int]:
        row = _to_int_row(vec) if not _is_int_row(vec) else dict(vec)
        pivots = self.pivots
        while row:
            hit = None
            for c in row:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                break
            p = pivots[hit]
            a, b = row[hit], p[hit]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {c: v * fa for c, v in row.items()}
            for c, v in p.items():
                nv = new.get(c, 0) - fb * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            row = _primitive(new) if new else new
        return row

    def add(self, vec) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        # Markowitz-flavoured choice: pivot on the column with the smallest index
        # among those with the smallest absolute entry keeps growth modest.
        piv = min(row, key=lambda c: (abs(row[c]), c))
        self.pivots[piv] = row
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)


def _is_int_row(vec) -> bool:
    for v in vec.values():
        if type(v) is not int:
            return False
    return True


def rank_of_rows(rows: Iterable[Vector]) -> int:
    rows = sorted((r for r in rows if r), key=len)
    el = Eliminator()
    for r in rows:
        el.add(r)
    return len(el)


def rank(m: SparseMatrix) -> int:
    rows = m.rows()
    cols = m.columns()
    # eliminate along the shorter side
    return rank_of_rows(rows if len(rows) <= len(cols) else cols)


def rref(m: SparseMatrix) -> Tuple[SparseMatrix, int, List[int]]:
    """Reduced row echelon form.

    Returns ``(R, rank, pivot_columns)``; ``R`` has the same shape as ``m``
    with the nonzero rows first, pivots strictly increasing and scaled to 1.
    """
    basis = _rref_rows(m.rows())
    piv = [min(r) for r in basis]
    ent = {(i, c): v for i, r in enumerate(basis) for c, v in r.items()}
    return SparseMatrix(m.nrows, m.ncols, ent), len(basis), piv


def _rref_rows(rows: Iterable[Vector]) -> List[Vector]:
    """Canonical reduced echelon basis (list of Fraction rows) of a row span."""
    work: Dict[int, Vector] = {}
    for r in rows:
        r = {c: Fraction(v) for c, v in r.items() if v}
        while r:
            lead = min(r)
            if lead in work:
                p = work[lead]
                f = r[lead]
                for c, v in p.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            else:
                inv = 1 / r[lead]
                work[lead] = {c: v * inv for c, v in r.items()}
                break
    # back substitution, from the largest pivot down
    leads = sorted(work)
    for i in range(len(leads) - 1, -1, -1):
        pi = leads[i]
        prow = work[pi]
        for j in range(i):
            q = work[leads[j]]
            f = q.get(pi)
            if f:
                for c, v in prow.items():
                    nv = q.get(c, 0) - f * v
                    if nv:
                        q[c] = nv
                    else:
                        q.pop(c, None)
    return [work[p] for p in leads]


class Subspace:
    """A subspace of Q^ambient, held as a canonical reduced echelon basis."""

    __slots__ = ("ambient", "basis", "_pivots")

    def __init__(self, ambient: int, vectors: Iterable[Vector] = ()):
        self.ambient = ambient
        for v in vectors:
            for c in v:
                if not 0 <= c < ambient:
                    raise IndexError(f"coordinate {c} outside ambient dimension {ambient}")
        self.basis: List[Vector] = _rref_rows(vectors)
        self._pivots = [min(r) for r in self.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> SparseMatrix:
        return SparseMatrix.from_rows(self.ambient, self.basis)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise ValueError("ambient dimensions differ")

    def contains(self, vec: Vector) -> bool:
        r = {c: Fraction(v) for c, v in vec.items() if v}
        for p, row in zip(self._pivots, self.basis):
            f = r.get(p)
            if f:
                for c, v in row.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        return not r

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # solve sum a_i u_i = sum b_j w_j ; kernel of the stacked map
        k = self.dim
        cols = [dict(v) for v in self.basis] + [{c: -x for c, x in w.items()} for w in other.basis]
        m = SparseMatrix.from_columns(self.ambient, cols)
        ker = kernel(m)
        out = []
        for z in ker.basis:
            vec: Vector = {}
            for i in range(k):
                a = z.get(i)
                if a:
                    for c, x in self.basis[i].items():
                        vec[c] = vec.get(c, 0) + a * x
            out.append({c: x for c, x in vec.items() if x})
        return Subspace(self.ambient, out)

    def quotient_basis(self, sub: "Subspace") -> List[Vector]:
        """Vectors of ``self`` completing a basis of ``sub`` (``sub`` must lie in ``self``)."""
        self._check(sub)
        if not self.contains_space(sub):
            raise ValueError("quotient requested for a subspace that is not contained")
        el = Eliminator()
        for v in sub.basis:
            el.add(v)
        out = []
        for v in self.basis:
            if el.add(v):
                out.append(v)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def kernel(m: SparseMatrix) -> Subspace:
    """Basis of ``{x : m x = 0}``."""
    basis = _rref_rows(m.rows())
    pivots = [min(r) for r in basis]
    pset = set(pivots)
    free = [c for c in range(m.ncols) if c not in pset]
    vecs = []
    for f in free:
        v: Vector = {f: Fraction(1)}
        for p, row in zip(pivots, basis):
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace(m.ncols, vecs)


class CoordinateSolver:
    """Express vectors in a fixed (independent) family.

    ``solve(v)`` returns the coefficients of ``v`` on the family, or ``None``
    when ``v`` is outside the span.
    """

    def __init__(self, family: Sequence[Vector]):
        self.size = len(family)
        # rows tagged with the identity so elimination records combinations
        self._rows: Dict[int, Tuple[Vector, Vector]] = {}
        for i, v in enumerate(family):
            r = {c: Fraction(x) for c, x in v.items() if x}
            tag: Vector = {i: Fraction(1)}
            r, tag = self._reduce(r, tag)
            if not r:
                raise ValueError("family is not linearly independent")
            lead = min(r)
            inv = 1 / r[lead]
            self._rows[lead] = ({c: x * inv for c, x in r.items()}, {c: x * inv for c, x in tag.items()})

    def _reduce(self, r: Vector, tag: Vector):
        while r:
            hit = None
            for c in sorted(r):
                if c in self._rows:
                    hit = c
                    break
            if hit is None:
                break
            prow, ptag = self._rows[hit]
            f = r[hit]
            for c, x in prow.items():
                nv = r.get(c, 0) - f * x
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
            for c, x in ptag.items():
                nv = tag.get(c, 0) - f * x
                if nv:
                    tag[c] = nv
                else:
                    tag.pop(c, None)
        return r, tag

    def solve(self, vec: Vector) -> Optional[Vector]:
        r = {c: Fraction(x) for c, x in vec.items() if x}
        r, tag = self._reduce(r, {})
        if r:
            return None
        return {c: -x for c, x in tag.items() if x}


def bareiss_rank(dense: Sequence[Sequence[int]]) -> int:
    """Rank by fraction-free Bareiss elimination on a dense integer matrix.

    Independent of the sparse code path; used as a cross-check.
    """
    a = [list(map(int, row)) for row in dense]
    n = len(a)
    m = len(a[0]) if n else 0
    r = 0
    prev = 1
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n):
            for j in range(c + 1, m):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == n:
            break
    return r
