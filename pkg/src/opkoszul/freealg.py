"""Nested free algebras ("levels") over Ass, Com and the shifted Poisson operads.

A level is one layer of a composite ``K_1 o K_2 o ... o V``.  Its elements
are interned nodes whose children are nodes of the level below.  Node kinds:

``'A'``   associative word ``(c_1, ..., c_k)``
``'C'``   graded-commutative monomial, children sorted by id
``'P<n>'`` product of Lie basis elements for the Poisson operad with a
          bracket of degree ``n - 1``

Leaves are generators of a quasi-free algebra or basis vectors of a strict
algebra.  Elements are dicts ``node_id -> coefficient``.

Sign conventions for ``P<n>``: write ``|a|`` for the degree and
``||a|| = |a| + n - 1`` for the shifted degree.  The bracket is a graded Lie
bracket in shifted degrees, ``[a, bc] = [a, b]c + (-1)^(||a|| |b|) b[a, c]``,
and the differential satisfies ``d[a, b] = [da, b] + (-1)^||a|| [a, db]``.
Free Lie algebras are modelled inside the tensor algebra on the shifted
children; a Lie basis is chosen per content (multiset of children) among
right-normed brackets.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from more_itertools import distinct_permutations

from .linalg import CoordinateSolver, Eliminator

Element = Dict[int, object]


# ---------------------------------------------------------------- node table
class _Table:
    def __init__(self):
        self.index: Dict[tuple, int] = {}
        self.key: List[tuple] = []
        self.deg: List[int] = []
        self.wt: List[int] = []
        self.bw: List[int] = []      # bracket count at this node
        self.slots: List[tuple] = []  # children in operation order

    def intern(self, key: tuple, deg: int, wt: int, bw: int, slots: tuple) -> int:
        i = self.index.get(key)
        if i is None:
            i = len(self.key)
            self.index[key] = i
            self.key.append(key)
            self.deg.append(deg)
            self.wt.append(wt)
            self.bw.append(bw)
            self.slots.append(slots)
        return i


T = _Table()


def deg(i: int) -> int:
    return T.deg[i]


def weight(i: int) -> int:
    return T.wt[i]


def bracket_weight(i: int) -> int:
    return T.bw[i]


def slots(i: int) -> tuple:
    return T.slots[i]


def kind(i: int) -> str:
    return T.key[i][0]


def is_leaf(i: int) -> bool:
    return T.key[i][0] == "leaf"


def is_unary(i: int) -> bool:
    return len(T.slots[i]) == 1


def leaf(owner: int, index: int, degree: int, wt: int) -> int:
    return T.intern(("leaf", owner, index), degree, wt, 0, ())


def describe(i: int) -> str:
    """Human readable rendering of a node."""
    k = T.key[i]
    if k[0] == "leaf":
        return _LEAF_NAMES.get((k[1], k[2]), f"g{k[1]}_{k[2]}")
    if k[0] == "A":
        return "(" + " ".join(describe(c) for c in k[1]) + ")"
    if k[0] == "C":
        return "{" + ".".join(describe(c) for c in k[1]) + "}"
    n = int(k[0][1:])
    return "<" + ".".join(LIE[n].describe(l) for l in k[1]) + ">"


_LEAF_NAMES: Dict[Tuple[int, int], str] = {}


def name_leaf(owner: int, index: int, name: str):
    _LEAF_NAMES[(owner, index)] = name


# ----------------------------------------------------------- element helpers
def add_into(acc: Element, elt: Element, coef=1):
    for k, v in elt.items():
        nv = acc.get(k, 0) + coef * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def scale(elt: Element, c) -> Element:
    if c == 1:
        return dict(elt)
    return {k: v * c for k, v in elt.items()} if c else {}


def _koszul_sort(items: Sequence[int], degs: Sequence[int]):
    """Sort ``items`` with the Koszul sign; ``None`` if an odd item repeats."""
    arr = list(zip(items, degs))
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1][0] > arr[j][0]:
            if arr[j - 1][1] % 2 and arr[j][1] % 2:
                sign = -sign
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            j -= 1
    for a, b in zip(arr, arr[1:]):
        if a[0] == b[0] and a[1] % 2:
            return None
    return sign, tuple(x for x, _ in arr)


def koszul_sign_of_arrangement(degs: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving items with degrees ``degs`` into the positions ``order``."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and degs[order[a]] % 2 and degs[order[b]] % 2:
                sign = -sign
    return sign


# ------------------------------------------------------------------ A and C
def a_node(word: Sequence[int]) -> int:
    word = tuple(word)
    return T.intern(("A", word), sum(T.deg[c] for c in word), sum(T.wt[c] for c in word), 0, word)


def c_node_signed(children: Sequence[int]):
    """Canonical commutative monomial: ``(sign, node)`` or ``None`` when zero."""
    r = _koszul_sort(children, [T.deg[c] for c in children])
    if r is None:
        return None
    sign, srt = r
    node = T.intern(("C", srt), sum(T.deg[c] for c in srt), sum(T.wt[c] for c in srt), 0, srt)
    return sign, node


def _product_pair(R: str, x: int, y: int) -> Optional[Tuple[int, int]]:
    if R == "A":
        return 1, a_node(T.slots[x] + T.slots[y])
    if R == "C":
        return c_node_signed(T.slots[x] + T.slots[y])
    return LIE[int(R[1:])].node_from_factors(T.key[x][1] + T.key[y][1])


_PROD_CACHE: Dict[tuple, Optional[Tuple[int, int]]] = {}


def product(R: str, x: Element, y: Element) -> Element:
    out: Element = {}
    for a, ca in x.items():
        for b, cb in y.items():
            key = (R, a, b)
            r = _PROD_CACHE.get(key, False)
            if r is False:
                r = _product_pair(R, a, b)
                _PROD_CACHE[key] = r
            if r is None:
                continue
            s, n = r
            nv = out.get(n, 0) + s * ca * cb
            if nv:
                out[n] = nv
            else:
                out.pop(n, None)
    return out


def product_list(R: str, elts: Sequence[Element]) -> Element:
    acc = elts[0]
    for e in elts[1:]:
        if not acc:
            return {}
        acc = product(R, acc, e)
    return acc


def unit(R: str, child: int) -> int:
    """The arity-one node of kind ``R`` on a child."""
    if R == "A":
        return a_node((child,))
    if R == "C":
        return c_node_signed((child,))[1]
    lt = LIE[int(R[1:])]
    return lt.node_from_factors((lt.generator(child),))[1]


def unit_elt(R: str, elt: Element) -> Element:
    return {unit(R, c): v for c, v in elt.items()}


# ---------------------------------------------------------------------- Lie
class LieTable:
    """Lie basis elements for the shifted Poisson operad with parameter n."""

    def __init__(self, n: int):
        self.n = n
        self.shift = n - 1
        self.leaves: List[tuple] = []     # arranged children (bracket tree is right-normed)
        self.texp: List[Dict[tuple, int]] = []
        self.content: List[tuple] = []
        self.pdeg: List[int] = []          # degree in the Poisson algebra
        self.wt: List[int] = []
        self._by_content: Dict[tuple, Tuple[List[int], Optional[CoordinateSolver], Dict[tuple, int]]] = {}
        self._bracket: Dict[Tuple[int, int], Element] = {}

    def sdeg_child(self, c: int) -> int:
        return T.deg[c] + self.shift

    def describe(self, l: int) -> str:
        leaves = [describe(c) for c in self.leaves[l]]
        s = leaves[-1]
        for x in reversed(leaves[:-1]):
            s = f"[{x},{s}]"
        return s

    # T-expansion of right-normed brackets
    def _right_normed(self, arr: tuple) -> Dict[tuple, int]:
        acc = {(arr[-1],): 1}
        sd = self.sdeg_child(arr[-1])
        for c in reversed(arr[:-1]):
            sc = self.sdeg_child(c)
            sign = -1 if (sc * sd) % 2 else 1
            new: Dict[tuple, int] = {}
            for w, v in acc.items():
                k1 = (c,) + w
                new[k1] = new.get(k1, 0) + v
                k2 = w + (c,)
                new[k2] = new.get(k2, 0) - sign * v
            acc = {k: v for k, v in new.items() if v}
            sd += sc
        return acc

    def basis(self, content: tuple) -> List[int]:
        """Lie basis ids for a sorted content tuple (computed once)."""
        entry = self._by_content.get(content)
        if entry is not None:
            return entry[0]
        words = {w: i for i, w in enumerate(distinct_permutations(content))}
        el = Eliminator()
        ids: List[int] = []
        vecs = []
        for arr in distinct_permutations(content):
            e = self._right_normed(arr)
            if not e:
                continue
            vec = {words[w]: v for w, v in e.items()}
            if el.add(vec):
                lid = len(self.leaves)
                self.leaves.append(arr)
                self.texp.append(e)
                self.content.append(content)
                self.pdeg.append(sum(T.deg[c] for c in content) + (len(content) - 1) * self.shift)
                self.wt.append(sum(T.wt[c] for c in content))
                ids.append(lid)
                vecs.append(vec)
        solver = CoordinateSolver(vecs) if vecs else None
        self._by_content[content] = (ids, solver, words)
        return ids

    def generator(self, c: int) -> int:
        return self.basis((c,))[0]

    def coordinates(self, content: tuple, texp: Dict[tuple, object]) -> Element:
        ids = self.basis(content)
        _, solver, words = self._by_content[content]
        if not texp:
            return {}
        vec = {words[w]: v for w, v in texp.items() if v}
        if not vec:
            return {}
        if solver is None:
            raise ArithmeticError("element is not in the free Lie algebra")
        co = solver.solve(vec)
        if co is None:
            raise ArithmeticError("element is not in the free Lie algebra")
        return {ids[i]: (int(v) if Fraction(v).denominator == 1 else v) for i, v in co.items()}

    def bracket(self, a: int, b: int) -> Element:
        """Lie bracket of two basis elements, expressed in the basis."""
        key = (a, b)
        r = self._bracket.get(key)
        if r is not None:
            return r
        sa = self.pdeg[a] + self.shift
        sb = self.pdeg[b] + self.shift
        sign = -1 if (sa * sb) % 2 else 1
        acc: Dict[tuple, int] = {}
        for w1, v1 in self.texp[a].items():
            for w2, v2 in self.texp[b].items():
                k = w1 + w2
                acc[k] = acc.get(k, 0) + v1 * v2
                k = w2 + w1
                acc[k] = acc.get(k, 0) - sign * v1 * v2
        content = tuple(sorted(self.content[a] + self.content[b]))
        r = self.coordinates(content, {k: v for k, v in acc.items() if v})
        self._bracket[key] = r
        return r

    def node_from_factors(self, factors: Sequence[int]):
        r = _koszul_sort(factors, [self.pdeg[f] for f in factors])
        if r is None:
            return None
        sign, srt = r
        sl = tuple(c for f in srt for c in self.leaves[f])
        d = sum(self.pdeg[f] for f in srt)
        w = sum(self.wt[f] for f in srt)
        bw = sum(len(self.leaves[f]) - 1 for f in srt)
        return sign, T.intern((f"P{self.n}", srt), d, w, bw, sl)


class _LieRegistry(dict):
    def __missing__(self, n):
        t = LieTable(n)
        self[n] = t
        return t


LIE: Dict[int, LieTable] = _LieRegistry()


def _pn(R: str) -> int:
    return int(R[1:])


def _lie_combo_in_node(lt: LieTable, factors: tuple, pos: int, combo: Element) -> Element:
    out: Element = {}
    for l, c in combo.items():
        f = factors[:pos] + (l,) + factors[pos + 1:]
        r = lt.node_from_factors(f)
        if r is None:
            continue
        s, node = r
        nv = out.get(node, 0) + s * c
        if nv:
            out[node] = nv
        else:
            out.pop(node, None)
    return out


_PBRACKET: Dict[Tuple[int, int], Element] = {}


def _bracket_lie_node(lt: LieTable, a: int, B: int) -> Element:
    """[a, B] for a Lie basis element ``a`` and a Poisson node ``B``."""
    factors = T.key[B][1]
    sa = lt.pdeg[a] + lt.shift
    out: Element = {}
    pre = 0
    for j, b in enumerate(factors):
        sign = -1 if (sa * pre) % 2 else 1
        add_into(out, _lie_combo_in_node(lt, factors, j, lt.bracket(a, b)), sign)
        pre += lt.pdeg[b]
    return out


def _bracket_nodes(n: int, A: int, B: int) -> Element:
    key = (A, B)
    r = _PBRACKET.get(key)
    if r is not None:
        return r
    lt = LIE[n]
    fa = T.key[A][1]
    if len(fa) == 1:
        r = _bracket_lie_node(lt, fa[0], B)
    else:
        # [A, B] = sum_j +- b_1 .. [A, b_j] .. b_q ; [A, b] = -(-1)^(||A|| ||b||) [b, A]
        sA = T.deg[A] + lt.shift
        factors = T.key[B][1]
        out: Element = {}
        pre = 0
        for j, b in enumerate(factors):
            sb = lt.pdeg[b] + lt.shift
            s1 = -1 if (sA * pre) % 2 else 1
            s2 = 1 if (sA * sb) % 2 else -1
            # the canonical factor order of [b, A] is its own sign convention,
            # so splicing its factors in place of b_j and re-sorting is exact
            for node, c in _bracket_lie_node(lt, b, A).items():
                rr = lt.node_from_factors(factors[:j] + T.key[node][1] + factors[j + 1:])
                if rr is not None:
                    add_into(out, {rr[1]: rr[0] * c}, s1 * s2)
            pre += lt.pdeg[b]
        r = out
    _PBRACKET[key] = r
    return r


def p_bracket(n: int, x: Element, y: Element) -> Element:
    out: Element = {}
    for a, ca in x.items():
        for b, cb in y.items():
            add_into(out, _bracket_nodes(n, a, b), ca * cb)
    return out


def _p_factor_value(lt: LieTable, leaves_args: Sequence[Element]) -> Element:
    """Evaluate a right-normed bracket of Poisson elements."""
    acc = leaves_args[-1]
    for x in reversed(leaves_args[:-1]):
        acc = p_bracket(lt.n, x, acc)
        if not acc:
            return {}
    return acc


# ------------------------------------------------------------------ evaluate
def evaluate(node: int, R: str, args: Sequence[Element]) -> Element:
    """Apply the operation of ``node`` (mapped into kind ``R``) to ``args``.

    ``args`` are elements of kind ``R`` aligned with ``slots(node)``.
    Supported operad maps: identity, Ass -> Com, Com -> Ass (symmetrized
    lift, only used where the result is taken modulo the commutator
    filtration), Com -> P_n (inclusion of the products) and P_n -> Com
    (kills brackets).
    """
    K = T.key[node][0]
    if K == "A":
        if R == "A" or R == "C":
            return product_list(R, args)
        raise ValueError(f"no operad map Ass -> {R}")
    if K == "C":
        if R == "C" or R.startswith("P"):
            return product_list(R, args)
        if R == "A":
            return _symmetrize(node, args)
        raise ValueError(f"no operad map Com -> {R}")
    # Poisson node
    n = _pn(K)
    if R == "C":
        if T.bw[node]:
            return {}
        return product_list("C", args)
    if R != K:
        raise ValueError(f"no operad map {K} -> {R}")
    lt = LIE[n]
    pos = 0
    vals = []
    for f in T.key[node][1]:
        k = len(lt.leaves[f])
        v = _p_factor_value(lt, args[pos:pos + k])
        if not v:
            return {}
        vals.append(v)
        pos += k
    return product_list(R, vals)


def _symmetrize(node: int, args: Sequence[Element]) -> Element:
    kids = T.slots[node]
    k = len(kids)
    degs = [T.deg[c] for c in kids]
    out: Element = {}
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    for perm in itertools.permutations(range(k)):
        s = koszul_sign_of_arrangement(degs, perm)
        add_into(out, product_list("A", [args[p] for p in perm]), Fraction(s, fact))
    return out


def slot_signs(node: int) -> List[int]:
    """Koszul signs for a degree -1 derivation entering each slot."""
    K = T.key[node][0]
    kids = T.slots[node]
    out = []
    if K in ("A", "C"):
        acc = 0
        for c in kids:
            out.append(-1 if acc % 2 else 1)
            acc += T.deg[c]
        return out
    lt = LIE[_pn(K)]
    pre = 0
    for f in T.key[node][1]:
        inner = 0
        for c in lt.leaves[f]:
            out.append(-1 if (pre + inner) % 2 else 1)
            inner += T.deg[c] + lt.shift
        pre += lt.pdeg[f]
    return out


def apply_derivation(node: int, dchild) -> Element:
    """Extend a degree -1 map on children to the node by the Leibniz rule.

    ``dchild(c)`` returns the image of child ``c`` as an element of the
    node's own kind.
    """
    K = T.key[node][0]
    kids = T.slots[node]
    signs = slot_signs(node)
    units = [{unit(K, c): 1} for c in kids]
    out: Element = {}
    for i, c in enumerate(kids):
        dc = dchild(c)
        if not dc:
            continue
        args = units[:i] + [dc] + units[i + 1:]
        add_into(out, evaluate(node, K, args), signs[i])
    return out


def substitute(node: int, images: Sequence[Element]) -> Element:
    """Replace each child by a combination of children (degree 0, same kind)."""
    K = T.key[node][0]
    return evaluate(node, K, [unit_elt(K, e) for e in images])


def to_kind(node: int, R: str) -> Element:
    """Image of a node under the operad map from its kind to ``R``."""
    if T.key[node][0] == R:
        return {node: 1}
    return evaluate(node, R, [{unit(R, c): 1} for c in T.slots[node]])


# --------------------------------------------------------------- enumeration
def _bounded(d, w, dmax, wmax) -> bool:
    return (dmax is None or d <= dmax) and (wmax is None or w <= wmax)


def _check_cost(universe: Sequence[int], dmax, wmax):
    for c in universe:
        if not ((T.deg[c] >= 1 and dmax is not None) or (T.wt[c] >= 1 and wmax is not None)):
            raise ValueError("unbounded enumeration: every generator needs positive degree "
                             "(with a degree bound) or positive weight (with a weight bound)")


def _sequences(universe: Sequence[int], dmax, wmax, multiset: bool) -> List[tuple]:
    out: List[tuple] = []
    uni = sorted(universe)

    def rec(prefix, d, w, start):
        if prefix:
            out.append(tuple(prefix))
        for idx in range(start if multiset else 0, len(uni)):
            c = uni[idx]
            nd, nw = d + T.deg[c], w + T.wt[c]
            if _bounded(nd, nw, dmax, wmax):
                prefix.append(c)
                rec(prefix, nd, nw, idx)
                prefix.pop()
    rec([], 0, 0, 0)
    return out


def enumerate_nodes(K: str, universe: Sequence[int], dmax, wmax) -> List[int]:
    """All nodes of kind ``K`` over ``universe`` within the degree/weight bounds."""
    _check_cost(universe, dmax, wmax)
    if K == "A":
        return [a_node(s) for s in _sequences(universe, dmax, wmax, False)]
    if K == "C":
        out = []
        for s in _sequences(universe, dmax, wmax, True):
            r = c_node_signed(s)
            if r is not None:
                out.append(r[1])
        return out
    lt = LIE[_pn(K)]
    lies: List[int] = []
    for content in _sequences(universe, dmax, wmax, True):
        extra = (len(content) - 1) * lt.shift
        d = sum(T.deg[c] for c in content) + extra
        if dmax is not None and d > dmax:
            continue
        lies.extend(lt.basis(content))
    # multisets of Lie basis elements
    out = []
    lies.sort()

    def rec(prefix, d, w, start):
        if prefix:
            r = lt.node_from_factors(prefix)
            if r is not None:
                out.append(r[1])
        for idx in range(start, len(lies)):
            l = lies[idx]
            nd, nw = d + lt.pdeg[l], w + lt.wt[l]
            if _bounded(nd, nw, dmax, wmax):
                prefix.append(l)
                rec(prefix, nd, nw, idx)
                prefix.pop()
    rec([], 0, 0, 0)
    return out
