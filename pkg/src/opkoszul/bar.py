"""Two-sided and nested simplicial bar constructions, normalized and totalized.

A shape ``[(M_1, O_1), ..., (M_m, O_m)]`` over an algebra ``X`` describes the
multisimplicial object with multidegree ``(r_1, .., r_m)`` equal to
``M_1 o O_1^r_1 o M_2 o O_2^r_2 o ... o X``.  Each ``M_j`` is a
:class:`Module`; only the outermost one may be a filtration subquotient.
Elements are trees of interned nodes (see :mod:`opkoszul.freealg`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from more_itertools import distinct_permutations

from . import freealg as fa
from .algebras import AlgebraPresentation, kind_of, tag_of
from .complexes import ChainComplex, ChainMap, UncertifiedDegree
from .freealg import Element
from .linalg import CoordinateSolver, SparseMatrix, Subspace
from .pbw import pbw_elements

Label = Tuple[Tuple[int, ...], int]   # (multidegree, tree)


@dataclass(frozen=True)
class Module:
    """Right module over an operad: the operad itself or a filtration subquotient.

    ``F^lo / F^hi`` of the commutator filtration of Ass (or the bracket-weight
    grading of a Poisson operad); ``hi=None`` means no upper cut.
    """

    kind: str
    lo: int = 0
    hi: Optional[int] = None

    @property
    def is_full(self) -> bool:
        return self.lo == 0 and self.hi is None

    def __str__(self) -> str:
        base = tag_of(self.kind)
        if self.is_full:
            return base
        if self.hi is None:
            return f"{base}>{self.lo - 1}"
        if self.hi == self.lo + 1:
            return f"{base}={self.lo}"
        if self.lo == 0:
            return f"{base}<={self.hi - 1}"
        return f"{base}[{self.lo},{self.hi})"


def module(tag: str) -> Module:
    return Module(kind_of(tag))


def truncated(tag: str, k: int, piece: str) -> Module:
    """``piece`` is ``'le'`` (weight <= k), ``'eq'`` (= k) or ``'gt'`` (> k)."""
    K = kind_of(tag)
    if piece == "le":
        return Module(K, 0, k + 1)
    if piece == "eq":
        return Module(K, k, k + 1)
    if piece == "gt":
        return Module(K, k + 1, None)
    raise ValueError(f"unknown piece {piece!r}")


Shape = Sequence[Tuple[Module, str]]


def parse_shape(shape) -> List[Tuple[Module, str]]:
    out = []
    for m, o in shape:
        out.append((m if isinstance(m, Module) else module(m), o if o in ("A", "C") or o.startswith("P") else kind_of(o)))
    return out


# ------------------------------------------------------------ level suffixes
class _Suffixes:
    """Interned level sequences (outermost first) over a fixed algebra."""

    def __init__(self):
        self.ids: Dict[tuple, int] = {}
        self.kind: List[str] = []
        self.role: List[str] = []
        self.child: List[int] = []
        self.alg: List[AlgebraPresentation] = []

    def get(self, levels: Tuple[Tuple[str, str], ...], alg: AlgebraPresentation) -> int:
        if not levels:
            return -1
        key = (levels, alg.token, alg.kind, alg.style)
        sid = self.ids.get(key)
        if sid is None:
            child = self.get(levels[1:], alg)
            sid = len(self.kind)
            self.ids[key] = sid
            self.kind.append(levels[0][0])
            self.role.append(levels[0][1])
            self.child.append(child)
            self.alg.append(alg)
        return sid


SUF = _Suffixes()
_ENUM: Dict[tuple, List[int]] = {}
_FACE: Dict[tuple, Element] = {}
_DINT: Dict[Tuple[int, int], Element] = {}
_MASK: Dict[int, int] = {}
_CONV: Dict[tuple, Element] = {}


def _enumerate(sid: int, alg: AlgebraPresentation, dmax, wmax) -> List[int]:
    key = (sid, alg.token, alg.style, dmax, wmax)
    r = _ENUM.get(key)
    if r is not None:
        return r
    if sid == -1:
        r = [l for l in alg.leaves if fa._bounded(fa.deg(l), fa.weight(l), dmax, wmax)]
    else:
        kids = _enumerate(SUF.child[sid], alg, dmax, wmax)
        r = fa.enumerate_nodes(SUF.kind[sid], kids, dmax, wmax)
    _ENUM[key] = r
    return r


def unary_mask(node: int) -> int:
    """Bit l set when every node at relative level l of the subtree is unary."""
    m = _MASK.get(node)
    if m is not None:
        return m
    if fa.is_leaf(node):
        m = 0
    else:
        kids = fa.slots(node)
        below = 0
        if not fa.is_leaf(kids[0]):
            below = -1
            for c in kids:
                below &= unary_mask(c)
        m = (1 if len(kids) == 1 else 0) | (below << 1)
    _MASK[node] = m
    return m


def internal_d(node: int, sid: int) -> Element:
    """Differential of a tree whose top level is ``sid`` (Leibniz through all levels)."""
    key = (node, sid)
    r = _DINT.get(key)
    if r is not None:
        return r
    alg = SUF.alg[sid] if sid >= 0 else None
    if sid == -1:
        raise ValueError("internal_d on leaves needs the algebra")
    K = SUF.kind[sid]
    child = SUF.child[sid]
    if child == -1:
        if SUF.role[sid] == "X":
            dchild = alg.dgen.__getitem__
        else:
            dchild = lambda c: fa.unit_elt(K, alg.d_leaf(c))
    else:
        dchild = lambda c: fa.unit_elt(K, internal_d(c, child))
    r = fa.apply_derivation(node, dchild)
    _DINT[key] = r
    return r


def face(node: int, sid: int, depth: int, result_kind: Optional[str]) -> Element:
    """Merge the levels ``depth`` and ``depth + 1`` below ``node`` into ``result_kind``."""
    key = (node, sid, depth, result_kind)
    r = _FACE.get(key)
    if r is not None:
        return r
    if depth == 0:
        if SUF.child[sid] == -1:
            alg = SUF.alg[sid]
            if not alg.is_strict:
                raise ValueError("cannot merge the bottom level of a quasi-free algebra")
            r = alg.act(node)
        else:
            args = [fa.to_kind(c, result_kind) for c in fa.slots(node)]
            r = fa.evaluate(node, result_kind, args)
    else:
        images = [face(c, SUF.child[sid], depth - 1, result_kind) for c in fa.slots(node)]
        r = fa.substitute(node, images)
    _FACE[key] = r
    return r


def convert(node: int, src: int, dst: int) -> Element:
    """Apply operad maps levelwise from level sequence ``src`` to ``dst``."""
    if src == dst or src == -1:
        return {node: 1}
    key = (node, src, dst)
    r = _CONV.get(key)
    if r is not None:
        return r
    K2 = SUF.kind[dst]
    images = [convert(c, SUF.child[src], SUF.child[dst]) for c in fa.slots(node)]
    r = fa.evaluate(node, K2, [fa.unit_elt(K2, im) for im in images])
    _CONV[key] = r
    return r


# -------------------------------------------------------------- bar complex
class BarComplex:
    """Normalized total complex of a (nested) bar construction.

    Degree mode (``weights is None``): all trees of total degree <= ``top``;
    needs generators of positive degree; certified through ``top - 1``.

    Weight mode: the summand of the given weights, complete in every degree.
    """

    def __init__(self, shape: Shape, x: AlgebraPresentation, top: Optional[int] = None,
                 weights: Optional[Sequence[int]] = None, name: str = ""):
        self.shape = parse_shape(shape)
        for m, _ in self.shape[1:]:
            if not m.is_full:
                raise ValueError("only the outermost module may be a filtration subquotient")
        self.x = x
        self.name = name or self._default_name()
        if weights is None:
            if top is None:
                raise ValueError("give a degree window top or a set of weights")
            if not x.is_connected:
                raise UncertifiedDegree("degree windows need generators of positive degree; "
                                        "use weight mode")
            self.weights = None
            self.top = top
            wmax = None
        else:
            self.weights = sorted(set(weights))
            if any(g.weight < 1 for g in x.generators):
                raise ValueError("weight mode needs generators of positive weight")
            self.top = None
            wmax = max(self.weights) if self.weights else 0
        m = len(self.shape)
        if weights is None:
            rmax = max(0, (top - 1) // 2) if x.is_connected else top
        else:
            rmax = max(0, wmax - 1)
        self.multidegrees = [r for s in range(rmax + 1) for r in _compositions(s, m)]
        self._levels: Dict[Tuple[int, ...], Tuple[int, int]] = {}
        raw: List[Label] = []
        for r in self.multidegrees:
            sid, omask = self.levels(r)
            sr = sum(r)
            dmax = None if self.top is None else self.top - sr
            if dmax is not None and dmax < 0:
                continue
            if sid == -1:
                cands = _enumerate(-1, x, dmax, wmax)
            else:
                cands = _enumerate(sid, x, dmax, wmax)
            for t in cands:
                if unary_mask(t) & omask:
                    continue
                if self.weights is not None and fa.weight(t) not in self.weights:
                    continue
                raw.append((r, t))
        raw.sort(key=lambda lab: (self.degree(lab), fa.weight(lab[1]), lab[0], lab[1]))
        self.raw_labels = raw
        self.raw_index = {lab: i for i, lab in enumerate(raw)}
        self._boundary_cache: Dict[Label, Element] = {}
        self._setup_subquotient()
        self._complex: Optional[ChainComplex] = None

    def _default_name(self) -> str:
        inner = ", ".join(f"({m},{tag_of(o)})" for m, o in self.shape)
        return f"Bar[{inner}]({self.x.name or 'x'})"

    # -- structure -------------------------------------------------------
    def levels(self, r: Sequence[int]) -> Tuple[int, int]:
        r = tuple(r)
        got = self._levels.get(r)
        if got is not None:
            return got
        lv: List[Tuple[str, str]] = []
        omask = 0
        for (M, O), rj in zip(self.shape, r):
            lv.append((M.kind, "M"))
            for _ in range(rj):
                omask |= 1 << len(lv)
                lv.append((O, "O"))
        if not self.x.is_strict:
            lv.append((self.x.kind, "X"))
        sid = SUF.get(tuple(lv), self.x)
        self._levels[r] = (sid, omask)
        return sid, omask

    def degree(self, lab: Label) -> int:
        return fa.deg(lab[1]) + sum(lab[0])

    def raw_boundary(self, lab: Label) -> Element:
        """Total differential of a basis tree, as a combination of labels."""
        got = self._boundary_cache.get(lab)
        if got is not None:
            return got
        r, tree = lab
        sid, omask = self.levels(r)
        out: Dict[Label, object] = {}
        pos = 0
        pre = 0
        for j, ((M, O), rj) in enumerate(zip(self.shape, r)):
            if rj:
                r2 = r[:j] + (rj - 1,) + r[j + 1:]
                _, omask2 = self.levels(r2)
                sdir = -1 if pre % 2 else 1
                for i in range(rj + 1):
                    depth = pos + i
                    if i == 0:
                        R = M.kind
                    elif i < rj:
                        R = O
                    else:
                        R = self._kind_below(sid, depth + 1)
                    s = sdir * (-1 if i % 2 else 1)
                    for t, c in face(tree, sid, depth, R).items():
                        if unary_mask(t) & omask2:
                            continue
                        k = (r2, t)
                        nv = out.get(k, 0) + s * c
                        if nv:
                            out[k] = nv
                        else:
                            out.pop(k, None)
            pos += 1 + rj
            pre += rj
        if sid != -1:
            sint = -1 if sum(r) % 2 else 1
            for t, c in internal_d(tree, sid).items():
                if unary_mask(t) & omask:
                    continue
                k = (r, t)
                nv = out.get(k, 0) + sint * c
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        else:
            for t, c in self.x.d_leaf(tree).items():
                fa.add_into(out, {(r, t): c})
        self._boundary_cache[lab] = out
        return out

    @staticmethod
    def _kind_below(sid: int, depth: int) -> Optional[str]:
        s = sid
        for _ in range(depth):
            s = SUF.child[s]
            if s == -1:
                return None
        return SUF.kind[s]

    # -- filtration subquotients of the outer module ----------------------
    def _setup_subquotient(self):
        self.mode = "plain"
        if self.shape and not self.shape[0][0].is_full:
            self.mode = "pbw" if self.shape[0][0].kind == "A" else "bracket"
        if self.mode == "plain":
            self.labels = list(self.raw_labels)
        elif self.mode == "bracket":
            M = self.shape[0][0]
            self.labels = [lab for lab in self.raw_labels
                           if M.lo <= fa.bracket_weight(lab[1]) and (M.hi is None or fa.bracket_weight(lab[1]) < M.hi)]
        else:
            self._setup_pbw()
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    def _setup_pbw(self):
        M = self.shape[0][0]
        blocks: Dict[tuple, List[Label]] = {}
        for lab in self.raw_labels:
            r, t = lab
            key = (r, tuple(sorted(fa.slots(t))))
            blocks.setdefault(key, []).append(lab)
        self._blocks: Dict[tuple, tuple] = {}
        self._block_of: Dict[Label, tuple] = {}
        labels: List[tuple] = []
        for key, labs in blocks.items():
            r, content = key
            arrs = list(distinct_permutations(content))
            if len(arrs) != len(labs):
                raise AssertionError("incomplete arrangement block")
            loc = {fa.a_node(a): i for i, a in enumerate(arrs)}
            degs = [fa.deg(c) for c in content]
            k = len(content)
            hi_vecs, lo_vecs = [], []
            for w, elt in pbw_elements(k):
                if w < M.lo:
                    continue
                vec: Dict[int, int] = {}
                for word, coef in elt.items():
                    node = fa.a_node(tuple(content[l] for l in word))
                    s = fa.koszul_sign_of_arrangement(degs, word)
                    i = loc[node]
                    vec[i] = vec.get(i, 0) + s * coef
                vec = {i: v for i, v in vec.items() if v}
                lo_vecs.append(vec)
                if M.hi is not None and w >= M.hi:
                    hi_vecs.append(vec)
            n = len(arrs)
            U_lo = Subspace(n, lo_vecs)
            U_hi = Subspace(n, hi_vecs)
            reps = U_lo.quotient_basis(U_hi)
            family = list(U_hi.basis) + list(reps)
            solver = CoordinateSolver(family) if family else None
            self._blocks[key] = (loc, solver, len(U_hi.basis), reps, r)
            for lab in labs:
                self._block_of[lab] = key
            for q in range(len(reps)):
                labels.append(("q", key, q))
        tree_deg = {}
        for key, (loc, _, _, reps, r) in self._blocks.items():
            any_node = next(iter(loc))
            tree_deg[key] = (fa.deg(any_node) + sum(r), fa.weight(any_node))
        labels.sort(key=lambda l: (tree_deg[l[1]], l[1], l[2]))
        self._tree_deg = tree_deg
        self.labels = labels

    def label_degree(self, lab) -> int:
        if self.mode == "pbw":
            return self._tree_deg[lab[1]][0]
        return self.degree(lab)

    def label_multidegree(self, lab) -> Tuple[int, ...]:
        if self.mode == "pbw":
            return self._blocks[lab[1]][4]
        return lab[0]

    def label_weight(self, lab) -> int:
        if self.mode == "pbw":
            return self._tree_deg[lab[1]][1]
        return fa.weight(lab[1])

    def raw(self, lab) -> Dict[Label, object]:
        """A label as a combination of raw trees."""
        if self.mode != "pbw":
            return {lab: 1}
        _, key, q = lab
        loc, _, _, reps, r = self._blocks[key]
        inv = {i: node for node, i in loc.items()}
        return {(r, inv[i]): v for i, v in reps[q].items()}

    def project(self, elt: Dict[Label, object], strict: bool = True) -> Dict[object, object]:
        """Coordinates of a raw combination in this (sub)quotient.

        Terms outside the window are dropped.  With ``strict`` a term
        outside the filtration piece raises.
        """
        if self.mode == "plain":
            return {lab: v for lab, v in elt.items() if v and lab in self.index}
        if self.mode == "bracket":
            M = self.shape[0][0]
            out = {}
            for lab, v in elt.items():
                if not v:
                    continue
                bw = fa.bracket_weight(lab[1])
                if M.hi is not None and bw >= M.hi:
                    continue
                if bw < M.lo:
                    if strict:
                        raise ValueError("element leaves the filtration piece")
                    continue
                if lab in self.index:
                    out[lab] = v
            return out
        groups: Dict[tuple, Dict[int, object]] = {}
        for lab, v in elt.items():
            if not v:
                continue
            key = self._block_of.get(lab)
            if key is None:
                continue
            loc = self._blocks[key][0]
            groups.setdefault(key, {})[loc[lab[1]]] = v
        out = {}
        for key, vec in groups.items():
            loc, solver, nhi, reps, r = self._blocks[key]
            if solver is None:
                if strict:
                    raise ValueError("element leaves the filtration piece")
                continue
            co = solver.solve(vec)
            if co is None:
                if strict:
                    raise ValueError("element leaves the filtration piece")
                continue
            for i, v in co.items():
                if i >= nhi:
                    out[("q", key, i - nhi)] = v
        return out

    # -- the chain complex -------------------------------------------------
    @property
    def complex(self) -> ChainComplex:
        if self._complex is None:
            self._complex = self._build()
        return self._complex

    def _build(self) -> ChainComplex:
        by_deg: Dict[int, list] = {}
        for lab in self.labels:
            by_deg.setdefault(self.label_degree(lab), []).append(lab)
        if self.top is not None:
            lo, hi = 0, self.top
            # without generators every bar complex is zero in all degrees
            top_exact = not self.x.generators
        else:
            lo = min(by_deg, default=0)
            lo = min(lo, 0)
            hi = max(by_deg, default=0)
            top_exact = True
        pos = {}
        for dgr, labs in by_deg.items():
            for i, lab in enumerate(labs):
                pos[lab] = i
        diff = {}
        for n in range(lo + 1, hi + 1):
            ent = {}
            for j, lab in enumerate(by_deg.get(n, [])):
                image: Dict[Label, object] = {}
                for rl, c in self.raw(lab).items():
                    fa.add_into(image, self.raw_boundary(rl), c)
                for tl, v in self.project(image).items():
                    ent[(pos[tl], j)] = v
            diff[n] = SparseMatrix(len(by_deg.get(n - 1, [])), len(by_deg.get(n, [])), ent)
        blocks = {n: [self.label_weight(l) for l in by_deg.get(n, [])] for n in range(lo, hi + 1)}
        self._pos = pos
        self._by_deg = by_deg
        return ChainComplex(lo, hi, by_deg, diff, top_exact=top_exact, name=self.name, blocks=blocks)

    def position(self, lab) -> Tuple[int, int]:
        self.complex
        return self.label_degree(lab), self._pos[lab]

    def vector(self, coords: Dict[object, object]) -> Dict[int, Dict[int, object]]:
        """Split label coordinates into per-degree index vectors."""
        self.complex
        out: Dict[int, Dict[int, object]] = {}
        for lab, v in coords.items():
            d = self.label_degree(lab)
            out.setdefault(d, {})[self._pos[lab]] = v
        return out

    def describe(self, lab) -> str:
        parts = []
        for (r, t), v in self.raw(lab).items():
            parts.append(f"{v}*{list(r)}{fa.describe(t)}")
        return " + ".join(parts)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -------------------------------------------------------------------- maps
def bar_map(src: BarComplex, tgt: BarComplex, tree_map: Callable[[Label], Dict[Label, object]],
            check: bool = True) -> ChainMap:
    """Chain map induced by a map on raw trees."""
    S, Tc = src.complex, tgt.complex
    blocks = {}
    for n in range(S.lo, min(S.hi, Tc.hi) + 1):
        ent = {}
        for j, lab in enumerate(S.labels.get(n, [])):
            image: Dict[Label, object] = {}
            for rl, c in src.raw(lab).items():
                fa.add_into(image, tree_map(rl), c)
            for tl, v in tgt.project(image).items():
                dg, p = tgt.position(tl)
                if dg != n:
                    raise AssertionError("map does not preserve degree")
                ent[(p, j)] = v
        blocks[n] = SparseMatrix(Tc.dim(n), S.dim(n), ent)
    return ChainMap(S, Tc, blocks, check=check)


def level_map(src: BarComplex, tgt: BarComplex, check: bool = True) -> ChainMap:
    """Map between bar complexes of the same multidegrees, applying operad
    maps (Ass -> Com, Com -> Poisson, Poisson -> Com, identities) levelwise."""
    def tm(lab: Label):
        r, t = lab
        s_sid, _ = src.levels(r)
        d_sid, omask = tgt.levels(r)
        out = {}
        for t2, c in convert(t, s_sid, d_sid).items():
            if unary_mask(t2) & omask:
                continue
            out[(r, t2)] = out.get((r, t2), 0) + c
        return out
    return bar_map(src, tgt, tm, check=check)


def inclusion_of_algebra(xc: BarComplex, tgt: BarComplex, check: bool = True) -> ChainMap:
    """``x -> bar``: a generator tree goes to its unit tree in multidegree zero."""
    m = len(tgt.shape)
    zero = (0,) * m

    def tm(lab: Label):
        _, t = lab
        e: Element = {t: 1}
        for M, _ in reversed(tgt.shape):
            e = fa.unit_elt(M.kind, e)
        return {(zero, k): v for k, v in e.items()}
    return bar_map(xc, tgt, tm, check=check)


def morphism_map(src: BarComplex, tgt: BarComplex, images: Dict[int, Element],
                 check: bool = True) -> ChainMap:
    """Map of bar complexes induced by a morphism of quasi-free algebras.

    ``images`` sends each generator leaf of ``src.x`` to an element of
    ``tgt.x`` of the same degree; both bars must have the same shape.
    """
    if src.x.is_strict or tgt.x.is_strict:
        raise ValueError("morphisms are implemented between quasi-free presentations")

    def push(node: int, sid: int) -> Element:
        if sid == -1:
            return dict(images[node])
        K = SUF.kind[sid]
        child = SUF.child[sid]
        if child == -1:
            return fa.evaluate(node, K, [images[c] for c in fa.slots(node)])
        return fa.substitute(node, [push(c, child) for c in fa.slots(node)])

    def tm(lab: Label):
        r, t = lab
        s_sid, _ = src.levels(r)
        _, omask = tgt.levels(r)
        out = {}
        for t2, c in push(t, s_sid).items():
            if s_sid != -1 and unary_mask(t2) & omask:
                continue
            out[(r, t2)] = out.get((r, t2), 0) + c
        return out
    return bar_map(src, tgt, tm, check=check)


# ---------------------------------------------------------- public builders
def algebra_complex(x: AlgebraPresentation, top: Optional[int] = None,
                    weights: Optional[Sequence[int]] = None) -> BarComplex:
    """The underlying chain complex of ``x`` (no bar directions)."""
    return BarComplex([], x, top=top, weights=weights, name=x.name or "x")


def bar(m, o, x: AlgebraPresentation, top: Optional[int] = None,
        weights: Optional[Sequence[int]] = None) -> BarComplex:
    """``|Bar(m, o, x)|``: realization of the two-sided simplicial bar construction."""
    return BarComplex([(m, o)], x, top=top, weights=weights)


def nested_bar(shape, x: AlgebraPresentation, top: Optional[int] = None,
               weights: Optional[Sequence[int]] = None, inner: str = "ass") -> BarComplex:
    """Multisimplicial bar for a list of outer operads, each over ``inner``.

    ``shape`` may be a list of tags (``['com', 'ass']``) or of
    ``(module, operad)`` pairs.
    """
    pairs = []
    for s in shape:
        if isinstance(s, tuple):
            pairs.append(s)
        else:
            pairs.append((s, inner))
    return BarComplex(pairs, x, top=top, weights=weights)


def derived_abelianization(x: AlgebraPresentation, top: Optional[int] = None,
                           weights: Optional[Sequence[int]] = None) -> BarComplex:
    """``Com o^L_O x`` for an Ass or Poisson algebra x, by the bar route."""
    return BarComplex([(module("com"), x.kind)], x, top=top, weights=weights)


def relative_composite(m, o, x: AlgebraPresentation, top: Optional[int] = None,
                       weights: Optional[Sequence[int]] = None) -> ChainComplex:
    """Underived ``m o_o x``: the cokernel of ``m o o o x => m o x``.

    Computed cell by cell as the quotient of the simplicial degree 0 part of
    the bar construction by the image of the alternating face sum.  In
    degree mode the result is certified through ``top - 1``.
    """
    b = BarComplex([(m, o)], x, top=None if top is None else max(top + 1, 3), weights=weights,
                   name=f"{m}o_{o}({x.name or 'x'})")
    zero, one = (0,), (1,)
    base: Dict[int, list] = {}
    for lab in b.labels:
        if b.label_multidegree(lab) == zero:
            base.setdefault(b.label_degree(lab), []).append(lab)

    def face_image(lab, keep):
        image: Dict[Label, object] = {}
        for rl, c in b.raw(lab).items():
            fa.add_into(image, {k: v for k, v in b.raw_boundary(rl).items() if k[0] == keep}, c)
        return b.project(image)

    rel: Dict[int, list] = {}
    for lab in b.labels:
        if b.label_multidegree(lab) == one:
            n = b.label_degree(lab) - 1
            if top is None or n <= top:
                rel.setdefault(n, []).append(face_image(lab, zero))
    if top is None:
        degs = set(base) | {0}
        lo, hi = min(degs), max(degs)
    else:
        lo, hi = 0, top
    reps: Dict[int, List[Dict[int, object]]] = {}
    solvers = {}
    for n in range(lo, hi + 1):
        idx = {lab: i for i, lab in enumerate(base.get(n, []))}
        rels = [{idx[l]: v for l, v in r.items()} for r in rel.get(n, [])]
        amb = len(idx)
        R = Subspace(amb, rels)
        q = Subspace(amb, [{i: 1} for i in range(amb)]).quotient_basis(R)
        reps[n] = q
        fam = list(R.basis) + q
        solvers[n] = (idx, CoordinateSolver(fam) if fam else None, len(R.basis))
    diff = {}
    for n in range(lo + 1, hi + 1):
        idx_n = base.get(n, [])
        idx_lo, solver, nrel = solvers[n - 1]
        ent = {}
        for j, rep in enumerate(reps[n]):
            image: Dict[Label, object] = {}
            for i, c in rep.items():
                fa.add_into(image, face_image(idx_n[i], zero), c)
            vec = {idx_lo[l]: v for l, v in image.items() if l in idx_lo}
            if not vec:
                continue
            co = solver.solve(vec)
            for i, v in co.items():
                if i >= nrel:
                    ent[(i - nrel, j)] = v
        diff[n] = SparseMatrix(len(reps[n - 1]), len(reps[n]), ent)
    labels = {n: list(range(len(reps[n]))) for n in range(lo, hi + 1)}
    blocks = None
    return ChainComplex(lo, hi, labels, diff, top_exact=top is None, name=b.name, blocks=blocks)


def homology_by_weight(b: BarComplex, degrees: Sequence[int]) -> Dict[int, Dict[int, int]]:
    """Homology dimensions split by weight: ``{weight: {degree: dim}}``."""
    c = b.complex
    out: Dict[int, Dict[int, int]] = {}
    weights = sorted({b.label_weight(l) for l in b.labels})
    for w in weights:
        labels = {n: [l for l in c.labels.get(n, []) if b.label_weight(l) == w] for n in range(c.lo, c.hi + 1)}
        idx = {n: [i for i, l in enumerate(c.labels.get(n, [])) if b.label_weight(l) == w]
               for n in range(c.lo, c.hi + 1)}
        diff = {}
        for n in range(c.lo + 1, c.hi + 1):
            rows = {i: k for k, i in enumerate(idx[n - 1])}
            cols = {i: k for k, i in enumerate(idx[n])}
            ent = {(rows[r], cols[cc]): v for (r, cc), v in c.d(n).entries.items() if cc in cols}
            diff[n] = SparseMatrix(len(idx[n - 1]), len(idx[n]), ent)
        sub = ChainComplex(c.lo, c.hi, labels, diff, top_exact=c.top_exact, valid=c.valid, check=False)
        out[w] = {n: sub.betti(n) for n in degrees}
    return out
