"""The operads Ass, Com and the shifted Poisson operads, their commutator
filtration pieces, PBW bases and operad maps.

All three operads are built from partial compositions on explicit bases:

* Ass(n): words (permutations of the inputs),
* Com(n): a single operation,
* P_k(n): multilinear elements of the free shifted Poisson algebra on
  n degree-0 inputs (products of Lie basis elements).

Indices of inputs are 0-based and ``compose(a, i, b)`` is the partial
composition a o_i b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import freealg as fa
from .linalg import CoordinateSolver, SparseMatrix, Subspace, rank
from .pbw import pbw_elements
from .symseq import SymmetricSequence

Vec = Dict[int, object]
OPERAD_LETTERS = -1   # leaf owner for the formal inputs of Poisson operations


def _add(acc: Vec, v: Vec, c=1):
    for k, x in v.items():
        nv = acc.get(k, 0) + c * x
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


class Operad:
    """Operad given by bases per arity and elementwise partial compositions."""

    def __init__(self, name: str, kind: str, carrier: SymmetricSequence,
                 partial: Callable[[int, int, int, int, int], Vec], weights: Dict[int, List[int]]):
        self.name = name
        self.kind = kind
        self.carrier = carrier
        self.cap = carrier.cap
        self._partial = partial
        self.weights = weights          # bracket weight per basis element
        self._cache: Dict[tuple, Vec] = {}

    def dim(self, n: int) -> int:
        return self.carrier.dim(n)

    def degree(self, n: int, i: int) -> int:
        return self.carrier.basis[n][i][1]

    @property
    def unit(self) -> Tuple[int, int]:
        return (1, 0)

    def compose_basis(self, n: int, a: int, i: int, m: int, b: int) -> Vec:
        key = (n, a, i, m, b)
        r = self._cache.get(key)
        if r is None:
            if n + m - 1 > self.cap:
                raise ValueError("composition exceeds the arity cap")
            r = self._partial(n, a, i, m, b)
            self._cache[key] = r
        return r

    def compose(self, n: int, a: Vec, i: int, m: int, b: Vec) -> Vec:
        out: Vec = {}
        for x, u in a.items():
            for y, v in b.items():
                _add(out, self.compose_basis(n, x, i, m, y), u * v)
        return out

    def gamma(self, k: int, mu: Vec, args: Sequence[Tuple[int, Vec]]) -> Vec:
        """Full composition mu(nu_1, .., nu_k), filling slots from the last one."""
        cur, ar = mu, k
        for i in reversed(range(k)):
            m, nu = args[i]
            cur = self.compose(ar, cur, i, m, nu)
            ar += m - 1
        return cur

    def composition_matrix(self, k: int, ns: Sequence[int]) -> SparseMatrix:
        """Matrix of gamma on carrier(k) (x) carrier(n_1) (x) .. (x) carrier(n_k)."""
        total = sum(ns)
        cols = []
        for mu in range(self.dim(k)):
            for nus in itertools.product(*(range(self.dim(n)) for n in ns)):
                cols.append(self.gamma(k, {mu: 1}, [(n, {j: 1}) for n, j in zip(ns, nus)]))
        return SparseMatrix.from_columns(self.dim(total), cols)

    def act(self, n: int, perm: Sequence[int], v: Vec) -> Vec:
        return self.carrier.act(n, perm).apply(v)

    def validate(self, cap: Optional[int] = None):
        """Unit, associativity and equivariance of partial compositions up to ``cap``."""
        cap = self.cap if cap is None else min(cap, self.cap)
        for n in range(1, cap + 1):
            for a in range(self.dim(n)):
                for i in range(n):
                    if self.compose_basis(n, a, i, 1, 0) != {a: 1}:
                        raise ValueError(f"right unit fails in arity {n}")
                if self.compose_basis(1, 0, 0, n, a) != {a: 1}:
                    raise ValueError(f"left unit fails in arity {n}")
        for n, m, p in itertools.product(range(2, cap + 1), repeat=3):
            if n + m + p - 2 > cap:
                continue
            for a, b, c in itertools.product(range(self.dim(n)), range(self.dim(m)), range(self.dim(p))):
                for i in range(n):
                    for j in range(m):
                        # sequential: (a o_i b) o_{i+j} c = a o_i (b o_j c)
                        lhs = self.compose(n + m - 1, self.compose_basis(n, a, i, m, b), i + j, p, {c: 1})
                        rhs = self.compose(n, {a: 1}, i, m + p - 1, self.compose_basis(m, b, j, p, c))
                        if lhs != rhs:
                            raise ValueError(f"sequential associativity fails at arities {(n, m, p)}")
                    for j in range(i + 1, n):
                        # parallel: (a o_j c) o_i b = (a o_i b) o_{j+m-1} c, with Koszul sign
                        s = -1 if (self.degree(m, b) * self.degree(p, c)) % 2 else 1
                        lhs = self.compose(n + p - 1, self.compose_basis(n, a, j, p, c), i, m, {b: 1})
                        rhs = self.compose(n + m - 1, self.compose_basis(n, a, i, m, b), j + m - 1, p, {c: s})
                        if lhs != rhs:
                            raise ValueError(f"parallel associativity fails at arities {(n, m, p)}")
        for n, m in itertools.product(range(2, cap + 1), repeat=2):
            if n + m - 1 > cap:
                continue
            for a, b in itertools.product(range(self.dim(n)), range(self.dim(m))):
                for i in range(n):
                    for t in range(n - 1):
                        tau = list(range(n))
                        tau[t], tau[t + 1] = tau[t + 1], tau[t]
                        lhs = self.compose(n, self.act(n, tau, {a: 1}), tau[i], m, {b: 1})
                        big = _block_perm(tau, i, m)
                        rhs = self.act(n + m - 1, big, self.compose_basis(n, a, i, m, b))
                        if lhs != rhs:
                            raise ValueError(f"equivariance fails at arities {(n, m)}")
        return True

    def __repr__(self) -> str:
        return f"Operad({self.name}, cap={self.cap})"


def _block_perm(tau: Sequence[int], i: int, m: int) -> Tuple[int, ...]:
    """Permutation of n+m-1 inputs induced by tau when input i is a block of size m."""
    n = len(tau)
    starts = {}
    # new position of each old input block
    sizes_new = [1] * n
    sizes_new[tau[i]] = m
    pos = 0
    for q in range(n):
        starts[q] = pos
        pos += sizes_new[q]
    out = []
    for old in range(n):
        if old == i:
            out.extend(starts[tau[i]] + t for t in range(m))
        else:
            out.append(starts[tau[old]])
    return tuple(out)


# ---------------------------------------------------------------- Ass, Com
def make_ass(cap: int = 6, validate_cap: int = 4) -> Operad:
    basis = {n: [(w, 0) for w in itertools.permutations(range(n))] for n in range(1, cap + 1)}
    index = {n: {w: i for i, (w, _) in enumerate(basis[n])} for n in basis}

    def relabel(n, t, j):
        w = basis[n][j][0]
        sw = {t: t + 1, t + 1: t}
        return {index[n][tuple(sw.get(l, l) for l in w)]: 1}

    carrier = SymmetricSequence.from_relabel(basis, relabel, cap, name="Ass")

    def partial(n, a, i, m, b):
        wa, wb = basis[n][a][0], basis[m][b][0]
        out = []
        for l in wa:
            if l < i:
                out.append(l)
            elif l == i:
                out.extend(x + i for x in wb)
            else:
                out.append(l + m - 1)
        return {index[n + m - 1][tuple(out)]: 1}

    weights = {n: [0] * len(basis[n]) for n in basis}
    op = Operad("Ass", "A", carrier, partial, weights)
    op.index = index
    op.validate(validate_cap)
    return op


def make_com(cap: int = 6, validate_cap: int = 4) -> Operad:
    basis = {n: [("mu", 0)] for n in range(1, cap + 1)}
    carrier = SymmetricSequence.from_relabel(basis, lambda n, t, j: {0: 1}, cap, name="Com")
    op = Operad("Com", "C", carrier, lambda n, a, i, m, b: {0: 1}, {n: [0] for n in basis})
    op.validate(validate_cap)
    return op


# ------------------------------------------------------------- Poisson P_k
def _letters(n: int) -> List[int]:
    return [fa.leaf(OPERAD_LETTERS, j, 0, 1) for j in range(n)]


def make_poisson(n_shift: int, cap: int = 5, validate_cap: int = 4) -> Operad:
    """Shifted Poisson operad: commutative product of degree 0 and a Lie
    bracket of degree ``n_shift - 1``."""
    if n_shift < 1:
        raise ValueError("n_shift must be >= 1")
    K = f"P{n_shift}"
    for j in range(cap):
        fa.name_leaf(OPERAD_LETTERS, j, f"x{j + 1}")
    nodes: Dict[int, List[int]] = {}
    for n in range(1, cap + 1):
        lets = _letters(n)
        cand = fa.enumerate_nodes(K, lets, None, n)
        multi = [c for c in cand if sorted(fa.slots(c)) == sorted(lets)]
        multi.sort(key=lambda c: (fa.bracket_weight(c), fa.describe(c)))
        nodes[n] = multi
    index = {n: {c: i for i, c in enumerate(nodes[n])} for n in nodes}
    basis = {n: [(fa.describe(c), fa.deg(c)) for c in nodes[n]] for n in nodes}

    def coords(n, elt) -> Vec:
        return {index[n][k]: v for k, v in elt.items() if v}

    def relabel_map(n, mapping):
        lets = _letters(max(n, max(mapping.values(), default=0) + 1))
        return lambda node: fa.substitute(node, [{lets[mapping[_letters(n).index(c)]]: 1} for c in fa.slots(node)])

    def relabel(n, t, j):
        node = nodes[n][j]
        lets = _letters(n)
        sw = {t: t + 1, t + 1: t}
        images = [{lets[sw.get(lets.index(c), lets.index(c))]: 1} for c in fa.slots(node)]
        return coords(n, fa.substitute(node, images))

    carrier = SymmetricSequence.from_relabel(basis, relabel, cap, name=f"P{n_shift}")

    def partial(n, a, i, m, b):
        total = n + m - 1
        big = _letters(total)
        small = _letters(m)
        nb = nodes[m][b]
        inner = fa.substitute(nb, [{big[small.index(c) + i]: 1} for c in fa.slots(nb)])
        na = nodes[n][a]
        lets_a = _letters(n)
        args = []
        for c in fa.slots(na):
            j = lets_a.index(c)
            if j < i:
                args.append({fa.unit(K, big[j]): 1})
            elif j == i:
                args.append(inner)
            else:
                args.append({fa.unit(K, big[j + m - 1]): 1})
        sign = -1 if ((n_shift - 1) * fa.deg(nb) * _brackets_after(na, fa.slots(na).index(lets_a[i]))) % 2 else 1
        return coords(total, fa.scale(fa.evaluate(na, K, args), sign))

    weights = {n: [fa.bracket_weight(c) for c in nodes[n]] for n in nodes}
    op = Operad(f"P{n_shift}", K, carrier, partial, weights)
    op.nodes = nodes
    op.validate(validate_cap)
    return op


def _brackets_after(node: int, slot: int) -> int:
    """Brackets written after the input at position ``slot`` in the infix form of ``node``.

    The algebra bracket sits between its arguments, while operad composition
    puts operations in front of their inputs; an inserted operation of
    degree e crosses each such bracket, giving (-1)^(e * shift * count).
    """
    lt = fa.LIE[int(fa.kind(node)[1:])]
    pos, count, seen = 0, 0, False
    for f in fa.T.key[node][1]:
        k = len(lt.leaves[f])
        if seen:
            count += k - 1
        elif pos <= slot < pos + k:
            count += k - 1 - (slot - pos)
            seen = True
        pos += k
    return count


# ------------------------------------------------------------------ PBW basis
@dataclass(frozen=True)
class PBWBasisElement:
    """Product of bracketings over a set partition; weight = bracket count."""

    arity: int
    weight: int
    expansion: Tuple[Tuple[Tuple[int, ...], int], ...]   # (word, coefficient)

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return dict(self.expansion)


def pbw_basis(n: int) -> List[PBWBasisElement]:
    """All n! PBW elements with their expansions in the word basis of Ass(n)."""
    return [PBWBasisElement(n, w, tuple(sorted(e.items()))) for w, e in pbw_elements(n)]


def pbw_matrix(ass: Operad, n: int) -> SparseMatrix:
    """Columns: PBW elements of arity n in the word basis (invertible)."""
    cols = [{ass.index[n][w]: c for w, c in el.expansion} for el in pbw_basis(n)]
    return SparseMatrix.from_columns(ass.dim(n), cols)


def pbw_weight_distribution(n: int) -> List[int]:
    out = [0] * max(n, 1)
    for el in pbw_basis(n):
        out[el.weight] += 1
    return out


# ---------------------------------------------------------- filtration pieces
class FiltrationPiece:
    """``F^lo / F^hi`` of the commutator filtration (Ass) or of the bracket
    weight grading (Poisson) as a symmetric sequence with actions."""

    def __init__(self, op: Operad, d: int, kind: str):
        if op.kind not in ("A",) and not op.kind.startswith("P"):
            raise ValueError("filtration pieces are defined for Ass and Poisson operads")
        if kind not in ("le", "eq", "gt"):
            raise ValueError("kind must be 'le', 'eq' or 'gt'")
        self.op, self.d, self.kind = op, d, kind
        self.lo, self.hi = {"le": (0, d + 1), "eq": (d, d + 1), "gt": (d + 1, None)}[kind]
        self.reps: Dict[int, List[Vec]] = {}
        self._solvers: Dict[int, Tuple[Optional[CoordinateSolver], int]] = {}
        for n in range(1, op.cap + 1):
            lo_vecs, hi_vecs = self._filtration_vectors(n)
            U_lo, U_hi = Subspace(op.dim(n), lo_vecs), Subspace(op.dim(n), hi_vecs)
            reps = U_lo.quotient_basis(U_hi)
            fam = list(U_hi.basis) + reps
            self.reps[n] = reps
            self._solvers[n] = (CoordinateSolver(fam) if fam else None, len(U_hi.basis))
        basis = {n: [((n, q), self._rep_degree(n, q)) for q in range(len(self.reps[n]))]
                 for n in range(1, op.cap + 1)}

        def relabel(n, t, q):
            tau = list(range(n))
            tau[t], tau[t + 1] = tau[t + 1], tau[t]
            return self.project(n, op.act(n, tau, self.reps[n][q]))

        self.carrier = SymmetricSequence.from_relabel(basis, relabel, op.cap, name=self.name)

    @property
    def name(self) -> str:
        sym = {"le": "<=", "eq": "=", "gt": ">"}[self.kind]
        return f"{self.op.name}^{sym}{self.d}"

    def _filtration_vectors(self, n: int):
        op = self.op
        if op.kind == "A":
            lo_vecs, hi_vecs = [], []
            for el in pbw_basis(n):
                v = {op.index[n][w]: c for w, c in el.expansion}
                if el.weight >= self.lo:
                    lo_vecs.append(v)
                if self.hi is not None and el.weight >= self.hi:
                    hi_vecs.append(v)
            return lo_vecs, hi_vecs
        ws = op.weights[n]
        lo_vecs = [{i: 1} for i in range(op.dim(n)) if ws[i] >= self.lo]
        hi_vecs = [{i: 1} for i in range(op.dim(n)) if self.hi is not None and ws[i] >= self.hi]
        return lo_vecs, hi_vecs

    def _rep_degree(self, n: int, q: int) -> int:
        return self.op.degree(n, next(iter(self.reps[n][q])))

    def dim(self, n: int) -> int:
        return len(self.reps.get(n, ()))

    def dims(self) -> Dict[int, int]:
        return {n: self.dim(n) for n in range(1, self.op.cap + 1)}

    def project(self, n: int, v: Vec, strict: bool = True) -> Vec:
        """Coordinates of a vector of F^lo(n) in the subquotient."""
        if not v:
            return {}
        solver, nhi = self._solvers[n]
        co = solver.solve(v) if solver else None
        if co is None:
            if strict:
                raise ValueError("vector is outside the filtration piece")
            return {}
        return {i - nhi: x for i, x in co.items() if i >= nhi}

    def right_action(self, n: int, q: int, i: int, m: int, b: Vec) -> Vec:
        """rep_q o_i b for b in the parent operad, in piece coordinates."""
        return self.project(n + m - 1, self.op.compose(n, self.reps[n][q], i, m, b))

    def left_action(self, k: int, mu: Vec, slot: int, n: int, q: int) -> Vec:
        """mu o_slot rep_q for mu in the parent operad."""
        return self.project(k + n - 1, self.op.compose(k, mu, slot, n, self.reps[n][q]))

    def lowest_arity(self) -> Optional[int]:
        for n in range(1, self.op.cap + 1):
            if self.dim(n):
                return n
        return None


def filtration_piece(op: Operad, d: int, kind: str) -> FiltrationPiece:
    return FiltrationPiece(op, d, kind)


def _ideal_vectors(op: Operad, m: int) -> List[Vec]:
    """Kernel of op(m) -> Com(m): spanned by PBW weight >= 1 / bracket weight >= 1."""
    if op.kind == "A":
        return [{op.index[m][w]: c for w, c in el.expansion} for el in pbw_basis(m) if el.weight >= 1]
    return [{i: 1} for i in range(op.dim(m)) if op.weights[m][i] >= 1]


def verify_right_action_factorization(piece: FiltrationPiece, cap: Optional[int] = None):
    """Check that the right action on an ``=d`` piece kills the kernel of op -> Com.

    Returns ``(ok, witness)``; the witness is the induced Com action
    ``{(n, q, i, m): coordinates}`` or, on failure, the offending data.
    """
    if piece.kind != "eq":
        raise ValueError("factorization through Com is asserted for '=d' pieces only")
    op = piece.op
    cap = op.cap if cap is None else min(cap, op.cap)
    witness = {}
    for n in range(1, cap + 1):
        for m in range(1, cap - n + 2):
            kernel_vecs = _ideal_vectors(op, m)
            lift = {0: 1}   # any lift of the Com generator
            if op.kind == "A":
                lift = {op.index[m][tuple(range(m))]: 1}
            else:
                lift = {next(i for i in range(op.dim(m)) if op.weights[m][i] == 0): 1}
            for q in range(piece.dim(n)):
                for i in range(n):
                    for kv in kernel_vecs:
                        img = piece.right_action(n, q, i, m, kv)
                        if img:
                            return False, {"arity": n, "rep": q, "slot": i, "acting_arity": m, "image": img}
                    witness[(n, q, i, m)] = piece.right_action(n, q, i, m, lift)
    return True, witness


# ------------------------------------------------------------------ maps
class OperadMap:
    def __init__(self, src: Operad, dst: Operad, matrices: Dict[int, SparseMatrix]):
        self.src, self.dst, self.matrices = src, dst, matrices

    def apply(self, n: int, v: Vec) -> Vec:
        return self.matrices[n].apply(v)

    def validate(self, cap: Optional[int] = None):
        cap = min(self.src.cap, self.dst.cap) if cap is None else cap
        if self.apply(1, {0: 1}) != {0: 1}:
            raise ValueError("unit not preserved")
        for n, m in itertools.product(range(1, cap + 1), repeat=2):
            if n + m - 1 > cap:
                continue
            for a, b in itertools.product(range(self.src.dim(n)), range(self.src.dim(m))):
                for i in range(n):
                    lhs = self.apply(n + m - 1, self.src.compose_basis(n, a, i, m, b))
                    rhs = self.dst.compose(n, self.apply(n, {a: 1}), i, m, self.apply(m, {b: 1}))
                    if lhs != rhs:
                        raise ValueError(f"map does not commute with composition at arities {(n, m)}, slot {i}")
            for t in range(n - 1):
                tau = list(range(n))
                tau[t], tau[t + 1] = tau[t + 1], tau[t]
                for a in range(self.src.dim(n)):
                    if self.apply(n, self.src.act(n, tau, {a: 1})) != self.dst.act(n, tau, self.apply(n, {a: 1})):
                        raise ValueError(f"map is not equivariant in arity {n}")
        return True


def operad_map(src: Operad, dst: Operad, validate: bool = True) -> OperadMap:
    """Ass -> Com, or a Poisson operad -> Com (projection to weight 0)."""
    if dst.kind != "C":
        raise ValueError("only maps to Com are provided")
    cap = min(src.cap, dst.cap)
    mats = {}
    for n in range(1, cap + 1):
        ent = {}
        for a in range(src.dim(n)):
            if src.kind == "A" or src.weights[n][a] == 0:
                ent[(0, a)] = 1
        mats[n] = SparseMatrix(1, src.dim(n), ent)
    f = OperadMap(src, dst, mats)
    if validate:
        f.validate(min(cap, 4))
    return f


def associated_graded_isomorphism(ass: Operad, p1: Operad, cap: Optional[int] = None) -> Dict[Tuple[int, int], SparseMatrix]:
    """Matrices ``P1(n)_w -> Ass^{=w}(n)`` sending a product of brackets to its
    commutator expansion; validated to be invertible and to intertwine
    partial compositions on the associated graded.
    """
    if ass.kind != "A" or p1.name != "P1":
        raise ValueError("expects Ass and the Poisson operad with n_shift = 1")
    cap = min(ass.cap, p1.cap) if cap is None else cap
    lt = fa.LIE[1]
    pieces = {w: FiltrationPiece(ass, w, "eq") for w in range(cap)}
    lets = _letters(cap)

    def lift(n: int, j: int) -> Vec:
        word_terms: Dict[Tuple[int, ...], int] = {(): 1}
        for f in fa.T.key[p1.nodes[n][j]][1]:
            exp = lt._right_normed(lt.leaves[f])
            new: Dict[Tuple[int, ...], int] = {}
            for w0, c0 in word_terms.items():
                for w1, c1 in exp.items():
                    k = w0 + tuple(lets.index(c) for c in w1)
                    new[k] = new.get(k, 0) + c0 * c1
            word_terms = new
        return {ass.index[n][w]: c for w, c in word_terms.items() if c}

    mats: Dict[Tuple[int, int], SparseMatrix] = {}
    image: Dict[Tuple[int, int], Vec] = {}
    for n in range(1, cap + 1):
        for w in range(n):
            cols = []
            for j in range(p1.dim(n)):
                if p1.weights[n][j] == w:
                    image[(n, j)] = pieces[w].project(n, lift(n, j))
                    cols.append(image[(n, j)])
            m = SparseMatrix.from_columns(pieces[w].dim(n), cols)
            if m.nrows != m.ncols or rank(m) != m.ncols:
                raise ValueError(f"associated graded comparison is not invertible in arity {n}, weight {w}")
            mats[(n, w)] = m
    for n, m in itertools.product(range(1, cap + 1), repeat=2):
        if n + m - 1 > cap:
            continue
        for a, b in itertools.product(range(p1.dim(n)), range(p1.dim(m))):
            wa, wb = p1.weights[n][a], p1.weights[m][b]
            for i in range(n):
                lhs = {}
                for j, c in p1.compose_basis(n, a, i, m, b).items():
                    _add(lhs, image[(n + m - 1, j)], c)
                ra = _vec_from_coords(pieces[wa], n, image[(n, a)])
                rb = _vec_from_coords(pieces[wb], m, image[(m, b)])
                rhs = pieces[wa + wb].project(n + m - 1, ass.compose(n, ra, i, m, rb))
                if lhs != rhs:
                    raise ValueError(f"associated graded comparison fails at arities {(n, m)}")
    return mats


def _vec_from_coords(piece: FiltrationPiece, n: int, co: Vec) -> Vec:
    out: Vec = {}
    for q, c in co.items():
        _add(out, piece.reps[n][q], c)
    return out
