"""Symmetric sequences: arity-graded chain complexes with symmetric-group actions.

Each arity component is a flat list of basis items ``(label, degree)``; the
action of the adjacent transposition s_i (swap inputs i and i+1) and the
differential are matrices on that flat basis.  Permutations act by
relabelling inputs: ``act(p)`` sends input ``j`` to ``p[j]``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from more_itertools import set_partitions

from .complexes import ChainComplex
from .linalg import CoordinateSolver, SparseMatrix, Subspace

Basis = List[Tuple[Hashable, int]]


def _identity(n: int) -> SparseMatrix:
    return SparseMatrix(n, n, {(i, i): 1 for i in range(n)})


def adjacent_word(perm: Sequence[int]) -> List[int]:
    """Adjacent swaps sorting the image list of ``perm`` (bubble sort order)."""
    arr = list(perm)
    swaps = []
    n = len(arr)
    for i in range(n):
        for j in range(n - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j)
    return swaps


class SymmetricSequence:
    """Reduced symmetric sequence with components up to ``cap``."""

    def __init__(self, basis: Dict[int, Basis], transpositions: Dict[int, List[SparseMatrix]],
                 differential: Optional[Dict[int, SparseMatrix]] = None, cap: Optional[int] = None,
                 name: str = "", validate: bool = True):
        if 0 in basis and basis[0]:
            raise ValueError("symmetric sequences here are reduced (no arity 0)")
        self.cap = cap if cap is not None else max(basis, default=0)
        self.basis = {n: list(basis.get(n, [])) for n in range(1, self.cap + 1)}
        self.name = name
        self.trans: Dict[int, List[SparseMatrix]] = {}
        for n in range(1, self.cap + 1):
            mats = list(transpositions.get(n, []))
            if len(mats) != n - 1:
                raise ValueError(f"arity {n} needs {n - 1} transposition matrices")
            self.trans[n] = mats
        self.diff = {n: (differential or {}).get(n) or SparseMatrix(self.dim(n), self.dim(n))
                     for n in range(1, self.cap + 1)}
        self._perm_cache: Dict[Tuple[int, tuple], SparseMatrix] = {}
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def degrees(self, n: int) -> List[int]:
        return [d for _, d in self.basis.get(n, ())]

    def dims_by_degree(self, n: int) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for _, d in self.basis.get(n, ()):
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def act(self, n: int, perm: Sequence[int]) -> SparseMatrix:
        perm = tuple(perm)
        key = (n, perm)
        m = self._perm_cache.get(key)
        if m is None:
            m = _identity(self.dim(n))
            # bubble sort gives perm o s_a1 o .. o s_ak = id
            for i in reversed(adjacent_word(perm)):
                m = m @ self.trans[n][i]
            self._perm_cache[key] = m
        return m

    def component(self, n: int) -> ChainComplex:
        degs = self.degrees(n)
        if not degs:
            return ChainComplex.zero()
        lo, hi = min(degs), max(degs)
        labels: Dict[int, list] = {d: [] for d in range(lo, hi + 1)}
        pos = {}
        for i, (lab, d) in enumerate(self.basis[n]):
            pos[i] = (d, len(labels[d]))
            labels[d].append(lab)
        mats: Dict[int, dict] = {d: {} for d in range(lo, hi + 1)}
        for (r, c), v in self.diff[n].entries.items():
            dr, ir = pos[r]
            dc, ic = pos[c]
            if dr != dc - 1:
                raise ValueError("differential does not lower degree by one")
            mats[dc][(ir, ic)] = v
        diff = {d: SparseMatrix(len(labels.get(d - 1, [])) if d > lo else 0, len(labels[d]),
                                mats[d] if d > lo else {}) for d in range(lo, hi + 1)}
        return ChainComplex(lo, hi, labels, diff, top_exact=True)

    def validate(self):
        for n in range(1, self.cap + 1):
            I = _identity(self.dim(n))
            s = self.trans[n]
            for i, m in enumerate(s):
                if m @ m != I:
                    raise ValueError(f"s_{i} is not an involution in arity {n}")
                if m @ self.diff[n] != self.diff[n] @ m:
                    raise ValueError(f"s_{i} does not commute with d in arity {n}")
            for i in range(len(s) - 1):
                if s[i] @ s[i + 1] @ s[i] != s[i + 1] @ s[i] @ s[i + 1]:
                    raise ValueError(f"braid relation fails at {i} in arity {n}")
            for i in range(len(s)):
                for j in range(i + 2, len(s)):
                    if s[i] @ s[j] != s[j] @ s[i]:
                        raise ValueError(f"far commutation fails at {i},{j} in arity {n}")
            if not (self.diff[n] @ self.diff[n]).is_zero():
                raise ValueError(f"d^2 != 0 in arity {n}")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_relabel(cls, basis: Dict[int, Basis], relabel: Callable[[int, int, int], Dict[int, object]],
                     cap: int, name: str = "", differential=None) -> "SymmetricSequence":
        """Build transposition matrices from ``relabel(n, i, j) -> {j': coef}``."""
        trans = {}
        for n in range(1, cap + 1):
            mats = []
            for i in range(n - 1):
                ent = {}
                for j in range(len(basis.get(n, []))):
                    for k, v in relabel(n, i, j).items():
                        ent[(k, j)] = v
                mats.append(SparseMatrix(len(basis.get(n, [])), len(basis.get(n, [])), ent))
            trans[n] = mats
        return cls(basis, trans, differential, cap=cap, name=name)

    @classmethod
    def unit(cls, cap: int) -> "SymmetricSequence":
        """The ground field in arity one."""
        return cls({1: [("id", 0)]}, {n: [_identity(0)] * (n - 1) for n in range(1, cap + 1)}, cap=cap, name="1")

    def __repr__(self) -> str:
        return f"SymmetricSequence({self.name}: " + ", ".join(
            f"{n}:{self.dim(n)}" for n in range(1, self.cap + 1)) + ")"


# ------------------------------------------------------------ circle product
def _ordered_partitions(r: int):
    """Set partitions of {0..r-1}, blocks sorted by least element."""
    for p in set_partitions(range(r)):
        yield tuple(sorted(tuple(sorted(b)) for b in p))


def circle(m: SymmetricSequence, n: SymmetricSequence, cap: Optional[int] = None) -> SymmetricSequence:
    """Circle product ``m o n`` up to ``cap``.

    The Sigma_k coinvariants of m(k) (x) (+) n(b_1) (x) .. (x) n(b_k) have as
    basis the tensors over set partitions with blocks ordered by least
    element; the Sigma_r action is induced by relabelling.
    """
    cap = min(m.cap, n.cap) if cap is None else cap
    if cap > min(m.cap, n.cap):
        raise ValueError("arity cap exceeds the inputs' certified caps")
    basis: Dict[int, Basis] = {}
    index: Dict[int, Dict[tuple, int]] = {}
    for r in range(1, cap + 1):
        items: Basis = []
        for blocks in _ordered_partitions(r):
            k = len(blocks)
            if m.dim(k) == 0:
                continue
            choices = [range(n.dim(len(b))) for b in blocks]
            for mi in range(m.dim(k)):
                for nis in itertools.product(*choices):
                    d = m.basis[k][mi][1] + sum(n.basis[len(b)][j][1] for b, j in zip(blocks, nis))
                    items.append(((blocks, mi, nis), d))
        basis[r] = items
        index[r] = {lab: i for i, (lab, _) in enumerate(items)}

    def relabel_elt(r: int, perm: Sequence[int], lab) -> Dict[int, object]:
        blocks, mi, nis = lab
        new_blocks = [tuple(sorted(perm[x] for x in b)) for b in blocks]
        order = sorted(range(len(blocks)), key=lambda j: new_blocks[j][0])
        # position of old block j in the new canonical order
        where = [0] * len(blocks)
        for pos, j in enumerate(order):
            where[j] = pos
        # inner relabellings
        inner_vecs = []
        for b, nb, j in zip(blocks, new_blocks, nis):
            rank = {x: t for t, x in enumerate(nb)}
            p = tuple(rank[perm[x]] for x in b)
            col = n.act(len(b), p).apply({j: 1})
            inner_vecs.append(col)
        mvec = m.act(len(blocks), tuple(where)).apply({mi: 1})
        ndegs = [n.basis[len(b)][j][1] for b, j in zip(blocks, nis)]
        sign = 1
        for a in range(len(blocks)):
            for c in range(a + 1, len(blocks)):
                if where[a] > where[c] and ndegs[a] % 2 and ndegs[c] % 2:
                    sign = -sign
        sorted_blocks = tuple(new_blocks[j] for j in order)
        out: Dict[int, object] = {}
        for mk, mv in mvec.items():
            for combo in itertools.product(*(list(inner_vecs[j].items()) for j in order)):
                coef = sign * mv
                ids = []
                for (ik, iv) in combo:
                    coef *= iv
                    ids.append(ik)
                key = index[r][(sorted_blocks, mk, tuple(ids))]
                out[key] = out.get(key, 0) + coef
        return {k: v for k, v in out.items() if v}

    trans = {}
    for r in range(1, cap + 1):
        mats = []
        for i in range(r - 1):
            perm = list(range(r))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            ent = {}
            for j, (lab, _) in enumerate(basis[r]):
                for k, v in relabel_elt(r, perm, lab).items():
                    ent[(k, j)] = v
            mats.append(SparseMatrix(len(basis[r]), len(basis[r]), ent))
        trans[r] = mats
    diff = {}
    for r in range(1, cap + 1):
        ent = {}
        for j, ((blocks, mi, nis), _) in enumerate(basis[r]):
            k = len(blocks)
            for mk, v in m.diff[k].apply({mi: 1}).items():
                key = index[r][(blocks, mk, nis)]
                ent[(key, j)] = ent.get((key, j), 0) + v
            pre = m.basis[k][mi][1]
            for t, (b, nj) in enumerate(zip(blocks, nis)):
                s = -1 if pre % 2 else 1
                for nk, v in n.diff[len(b)].apply({nj: 1}).items():
                    key = index[r][(blocks, mi, nis[:t] + (nk,) + nis[t + 1:])]
                    ent[(key, j)] = ent.get((key, j), 0) + s * v
                pre += n.basis[len(b)][nj][1]
        diff[r] = SparseMatrix(len(basis[r]), len(basis[r]), {k: v for k, v in ent.items() if v})
    return SymmetricSequence(basis, trans, diff, cap=cap, name=f"({m.name} o {n.name})")


# ------------------------------------------------------------- Schur functor
def schur_apply(m: SymmetricSequence, x: ChainComplex, weights: Optional[Dict[int, Sequence[int]]] = None,
                max_degree: Optional[int] = None, max_weight: Optional[int] = None) -> ChainComplex:
    """``(+)_n m(n) (x)_{Sigma_n} x^{(x) n}`` within degree and weight bounds.

    ``weights[d][i]`` is the weight of the i-th basis vector of ``x`` in degree
    d.  Either all of x sits in degrees >= 1 and ``max_degree`` is given, or
    every basis vector has positive weight and ``max_weight`` is given.
    Coinvariants are the image of the averaging projector.
    """
    vecs = []
    for d in range(x.lo, x.hi + 1):
        for i in range(x.dim(d)):
            w = weights[d][i] if weights else 0
            vecs.append((d, i, w))
    for d, i, w in vecs:
        ok = (d >= 1 and max_degree is not None) or (w >= 1 and max_weight is not None)
        if not ok:
            raise ValueError("unbounded Schur cell: need degree >= 1 with a degree bound "
                             "or positive weights with a weight bound")
    nv = len(vecs)
    cells: Dict[int, list] = {}
    labels_by_deg: Dict[int, list] = {}
    reps: Dict[int, list] = {}
    for n in range(1, m.cap + 1):
        if m.dim(n) == 0:
            continue
        for combo in itertools.combinations_with_replacement(range(nv), n):
            deg = sum(vecs[c][0] for c in combo)
            wt = sum(vecs[c][2] for c in combo)
            if max_weight is not None and wt > max_weight:
                continue
            if max_degree is not None and deg > max_degree:
                continue
            proj = _averaging_image(m, n, combo, [vecs[c][0] for c in combo])
            for k, v in enumerate(proj):
                md = _vec_degree(m, n, v)
                total = deg + md
                if max_degree is not None and total > max_degree:
                    continue
                labels_by_deg.setdefault(total, []).append((n, combo, k))
                reps.setdefault(total, []).append((n, combo, v))
    lo = min(labels_by_deg, default=0)
    hi = max(labels_by_deg, default=0)
    lo = min(lo, 0)
    index = {}
    for d, labs in labels_by_deg.items():
        for i, lab in enumerate(labs):
            index[lab] = (d, i)
    # differential: d(mu (x) v_1..v_n) = d mu (x) .. + sum +- mu (x) .. dv_i ..
    cache_solvers: Dict[tuple, tuple] = {}

    def coords(n, combo_list, mvec):
        """Express mu (x) v_{combo_list} (any order) in canonical coordinates."""
        order = sorted(range(n), key=lambda t: combo_list[t])
        srt = tuple(combo_list[t] for t in order)
        degs = [vecs[c][0] for c in combo_list]
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if order[a] > order[b] and degs[order[a]] % 2 and degs[order[b]] % 2:
                    sign = -sign
        # mu(x)v_{c_0}..v_{c_{n-1}} = sign * (mu . relabel) (x) sorted ; input order[a] goes to slot a
        where = [0] * n
        for a, t in enumerate(order):
            where[t] = a
        mv = m.act(n, tuple(where)).apply(mvec)
        key = (n, srt)
        if key not in cache_solvers:
            basis = _averaging_image(m, n, srt, [vecs[c][0] for c in srt])
            P = _projector(m, n, srt, [vecs[c][0] for c in srt])
            cache_solvers[key] = (CoordinateSolver(basis) if basis else None, P)
        solver, P = cache_solvers[key]
        if solver is None:
            return {}
        pv = P.apply(mv)
        if not pv:
            return {}
        co = solver.solve(pv)
        return {(n, srt, k): sign * v for k, v in co.items()}

    diff = {}
    for d in range(lo + 1, hi + 1):
        ent = {}
        for j, (n, combo, v) in enumerate(reps.get(d, [])):
            image: Dict[tuple, object] = {}
            dm = m.diff[n].apply(v)
            if dm:
                for key, c in coords(n, list(combo), dm).items():
                    image[key] = image.get(key, 0) + c
            pre = _vec_degree(m, n, v)
            for t, c in enumerate(combo):
                dv, iv, _ = vecs[c]
                s = -1 if pre % 2 else 1
                if dv - 1 >= x.lo:
                    for r, coef in x.d(dv).apply({iv: 1}).items():
                        target = next(q for q, (dd, ii, _) in enumerate(vecs) if dd == dv - 1 and ii == r)
                        new = list(combo)
                        new[t] = target
                        for key, cc in coords(n, new, v).items():
                            image[key] = image.get(key, 0) + s * coef * cc
                pre += dv
            for key, c in image.items():
                if c and key in index:
                    dd, ii = index[key]
                    ent[(ii, j)] = ent.get((ii, j), 0) + c
        diff[d] = SparseMatrix(len(labels_by_deg.get(d - 1, [])), len(labels_by_deg.get(d, [])), ent)
    return ChainComplex(lo, hi, labels_by_deg, diff, top_exact=True, name=f"{m.name}(x)")


def _vec_degree(m: SymmetricSequence, n: int, v) -> int:
    degs = {m.basis[n][i][1] for i in v}
    if len(degs) != 1:
        raise ValueError("inhomogeneous vector")
    return degs.pop()


def _stabilizer(combo: Sequence[int]):
    n = len(combo)
    for p in itertools.permutations(range(n)):
        if all(combo[p[i]] == combo[i] for i in range(n)):
            yield p


def _projector(m: SymmetricSequence, n: int, combo: Sequence[int], degs: Sequence[int]) -> SparseMatrix:
    stab = list(_stabilizer(combo))
    acc: Dict[Tuple[int, int], Fraction] = {}
    for p in stab:
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if p[a] > p[b] and degs[a] % 2 and degs[b] % 2:
                    sign = -sign
        for (r, c), v in m.act(n, p).entries.items():
            acc[(r, c)] = acc.get((r, c), 0) + Fraction(sign * v, len(stab))
    return SparseMatrix(m.dim(n), m.dim(n), {k: v for k, v in acc.items() if v})


def _averaging_image(m: SymmetricSequence, n: int, combo: Sequence[int], degs: Sequence[int]):
    P = _projector(m, n, combo, degs)
    cols = [c for c in P.columns() if c]
    # split by degree of m so the image basis is homogeneous
    by_deg: Dict[int, list] = {}
    for c in cols:
        by_deg.setdefault(m.basis[n][next(iter(c))][1], []).append(c)
    out = []
    for d in sorted(by_deg):
        out.extend(Subspace(m.dim(n), by_deg[d]).basis)
    return out


def schur_dims(c: ChainComplex) -> Dict[int, int]:
    return {d: c.dim(d) for d in range(c.lo, c.hi + 1) if c.dim(d)}
