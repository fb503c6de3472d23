"""Algebra presentations: quasi-free (generators plus differential) or strict
(finite carrier with a multiplication table)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import freealg as fa
from .freealg import Element

_TOKENS = itertools.count(1)

OPERAD_KINDS = {"ass": "A", "com": "C"}


class PresentationError(ValueError):
    """Invalid presentation, with a pointer to the offending generator."""

    def __init__(self, message: str, generator: Optional[str] = None):
        super().__init__(message if generator is None else f"{generator}: {message}")
        self.generator = generator
        self.detail = message


def kind_of(operad: str) -> str:
    """Map an operad tag (``ass``, ``com``, ``poisson:n``) to a node kind."""
    operad = operad.strip().lower()
    if operad in OPERAD_KINDS:
        return OPERAD_KINDS[operad]
    if operad.startswith("poisson:"):
        n = int(operad.split(":", 1)[1])
        if n < 1:
            raise PresentationError("poisson:n needs n >= 1")
        return f"P{n}"
    raise PresentationError(f"unknown operad tag {operad!r}")


def tag_of(kind: str) -> str:
    return {"A": "ass", "C": "com"}.get(kind) or f"poisson:{kind[1:]}"


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: int = 1


class AlgebraPresentation:
    """A quasi-free or strict algebra over Ass, Com or a shifted Poisson operad.

    Quasi-free: ``differential`` maps generator names to lists of
    ``(coefficient, word)``; a word is a sequence whose items are generator
    names or, for Poisson algebras, nested pairs ``[u, v]`` meaning brackets.

    Strict: ``generators`` list a basis of the (non-unital) carrier and
    ``multiplication`` maps pairs of basis names to ``(coefficient, name)``
    lists.  Missing products are zero.
    """

    def __init__(self, operad: str, generators: Sequence[Generator], differential=None,
                 style: str = "quasi-free", multiplication=None, name: str = "",
                 token: Optional[int] = None, validate: bool = True):
        self.operad = operad
        self.kind = kind_of(operad)
        self.style = style
        self.name = name
        self.generators = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        self.token = next(_TOKENS) if token is None else token
        self.leaves: List[int] = []
        for i, g in enumerate(self.generators):
            lid = fa.leaf(self.token, i, g.degree, g.weight)
            fa.name_leaf(self.token, i, g.name)
            self.leaves.append(lid)
        self.by_name = {g.name: l for g, l in zip(self.generators, self.leaves)}
        self.dgen: Dict[int, Element] = {l: {} for l in self.leaves}
        self.mult: Dict[Tuple[int, int], Element] = {}
        if style == "strict":
            if self.kind not in ("A", "C"):
                raise PresentationError("strict algebras must be associative or commutative")
            for key, terms in (multiplication or {}).items():
                a, b = key
                self.mult[(self._leaf(a), self._leaf(b))] = self._leaf_combo(terms)
            for gname, terms in (differential or {}).items():
                self.dgen[self._leaf(gname)] = self._leaf_combo(terms)
        elif style == "quasi-free":
            for gname, terms in (differential or {}).items():
                self.dgen[self._leaf(gname)] = self.parse_element(terms)
        else:
            raise PresentationError(f"unknown style {style!r}")
        if validate:
            self.validate()

    # -- parsing ---------------------------------------------------------
    def _leaf(self, name: str) -> int:
        try:
            return self.by_name[name]
        except KeyError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def _leaf_combo(self, terms) -> Element:
        out: Element = {}
        for coef, name in terms:
            fa.add_into(out, {self._leaf(name): Fraction(coef)})
        return _normalize(out)

    def _parse_item(self, item) -> Element:
        if isinstance(item, str):
            return {fa.unit(self.kind, self._leaf(item)): 1}
        if isinstance(item, (list, tuple)) and len(item) == 2 and self.kind.startswith("P"):
            return fa.p_bracket(int(self.kind[1:]), self._parse_item(item[0]), self._parse_item(item[1]))
        raise PresentationError(f"cannot parse monomial item {item!r}")

    def parse_element(self, terms) -> Element:
        out: Element = {}
        for coef, word in terms:
            if isinstance(word, str):
                word = [word]
            if not word:
                raise PresentationError("empty words are not allowed (algebras are non-unital)")
            fa.add_into(out, fa.product_list(self.kind, [self._parse_item(w) for w in word]),
                        Fraction(coef))
        return _normalize(out)

    # -- structure -------------------------------------------------------
    @property
    def is_strict(self) -> bool:
        return self.style == "strict"

    def act(self, node: int) -> Element:
        """Strict algebras: evaluate the operation of ``node`` on basis leaves."""
        K = fa.kind(node)
        if K.startswith("P"):
            if fa.bracket_weight(node):
                return {}
        elif K == "C" and self.kind == "A":
            raise ValueError("Com cannot act on a non-commutative strict algebra")
        acc: Element = {}
        first = True
        for c in fa.slots(node):
            if first:
                acc = {c: 1}
                first = False
                continue
            new: Element = {}
            for a, v in acc.items():
                fa.add_into(new, self.mult.get((a, c), {}), v)
            acc = new
            if not acc:
                return {}
        return acc

    def d_leaf(self, leaf: int) -> Element:
        return self.dgen.get(leaf, {})

    def validate(self):
        for g, l in zip(self.generators, self.leaves):
            for node, _ in self.dgen[l].items():
                if fa.deg(node) != g.degree - 1:
                    raise PresentationError(
                        f"differential term {fa.describe(node)} has degree {fa.deg(node)}, "
                        f"expected {g.degree - 1}", g.name)
                if fa.weight(node) != g.weight:
                    raise PresentationError(
                        f"differential term {fa.describe(node)} has weight {fa.weight(node)}, "
                        f"expected {g.weight}", g.name)
        if self.is_strict:
            self._validate_strict()
            return
        for g, l in zip(self.generators, self.leaves):
            dd: Element = {}
            for node, c in self.dgen[l].items():
                fa.add_into(dd, fa.apply_derivation(node, self.dgen.__getitem__), c)
            if dd:
                raise PresentationError("d^2 != 0", g.name)

    def _validate_strict(self):
        L = self.leaves
        for (a, b), prod in self.mult.items():
            for node in prod:
                if fa.deg(node) != fa.deg(a) + fa.deg(b) or fa.weight(node) != fa.weight(a) + fa.weight(b):
                    raise PresentationError("product does not preserve degree and weight")

        def mul(x: Element, y: Element) -> Element:
            out: Element = {}
            for a, u in x.items():
                for b, v in y.items():
                    fa.add_into(out, self.mult.get((a, b), {}), u * v)
            return out

        for a, b, c in itertools.product(L, repeat=3):
            if mul(mul({a: 1}, {b: 1}), {c: 1}) != mul({a: 1}, mul({b: 1}, {c: 1})):
                raise PresentationError("multiplication is not associative")
        if self.kind == "C":
            for a, b in itertools.product(L, repeat=2):
                s = -1 if (fa.deg(a) * fa.deg(b)) % 2 else 1
                if mul({a: 1}, {b: 1}) != fa.scale(mul({b: 1}, {a: 1}), s):
                    raise PresentationError("multiplication is not graded-commutative")
        for a, b in itertools.product(L, repeat=2):
            lhs: Element = {}
            for n, v in mul({a: 1}, {b: 1}).items():
                fa.add_into(lhs, self.d_leaf(n), v)
            rhs = mul(self.d_leaf(a), {b: 1})
            fa.add_into(rhs, mul({a: 1}, self.d_leaf(b)), -1 if fa.deg(a) % 2 else 1)
            if lhs != rhs:
                raise PresentationError("differential is not a derivation")
        for a in L:
            dd: Element = {}
            for n, v in self.d_leaf(a).items():
                fa.add_into(dd, self.d_leaf(n), v)
            if dd:
                raise PresentationError("d^2 != 0", self.generators[L.index(a)].name)

    @property
    def min_degree(self) -> int:
        return min((g.degree for g in self.generators), default=0)

    @property
    def is_connected(self) -> bool:
        return all(g.degree >= 1 for g in self.generators)

    def dims(self, max_degree: Optional[int] = None, max_weight: Optional[int] = None) -> Dict[Tuple[int, int], int]:
        """Dimensions of the underlying graded space per (degree, weight)."""
        if self.is_strict:
            nodes = [l for l in self.leaves if fa._bounded(fa.deg(l), fa.weight(l), max_degree, max_weight)]
        else:
            nodes = fa.enumerate_nodes(self.kind, self.leaves, max_degree, max_weight)
        out: Dict[Tuple[int, int], int] = {}
        for n in nodes:
            k = (fa.deg(n), fa.weight(n))
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"AlgebraPresentation({self.operad}, {self.style}, [{gens}])"


def _normalize(e: Element) -> Element:
    return {k: (int(v) if Fraction(v).denominator == 1 else v) for k, v in e.items() if v}


# ----------------------------------------------------------------- builders
def free_algebra(operad: str, generators: Sequence, name: str = "") -> AlgebraPresentation:
    """Quasi-free algebra with zero differential."""
    return AlgebraPresentation(operad, generators, {}, name=name)


def square_zero(degree: int = 0, weight: int = 1, name: str = "eps") -> AlgebraPresentation:
    """The strict commutative algebra spanned by one element with square zero."""
    return AlgebraPresentation("com", [Generator(name, degree, weight)], style="strict",
                               name="square-zero")


def dual_numbers_model(top: int) -> AlgebraPresentation:
    """Quasi-free associative resolution of the dual numbers, truncated.

    Generators t_1..t_top with t_n in degree n-1 and weight n, and
    d(t_n) = sum_{i+j=n} (-1)^i t_i t_j.
    """
    gens = [Generator(f"t{n}", n - 1, n) for n in range(1, top + 1)]
    diff = {}
    for n in range(2, top + 1):
        diff[f"t{n}"] = [((-1) ** i, [f"t{i}", f"t{n - i}"]) for i in range(1, n)]
    return AlgebraPresentation("ass", gens, diff, name=f"dual-numbers model <= t{top}")


def symmetric_algebra(names: Sequence[str], max_weight: int, operad: str = "com") -> AlgebraPresentation:
    """Strict reduced symmetric algebra on degree-0, weight-1 variables, truncated by weight.

    Products leaving the truncation are set to zero; computations must stay in
    weights up to ``max_weight``.
    """
    k = len(names)
    monos = []
    for w in range(1, max_weight + 1):
        for combo in itertools.combinations_with_replacement(range(k), w):
            monos.append(tuple(sum(1 for c in combo if c == i) for i in range(k)))

    def label(e):
        return "*".join(f"{names[i]}^{p}" if p > 1 else names[i] for i, p in enumerate(e) if p)

    gens = [Generator(label(e), 0, sum(e)) for e in monos]
    mult = {}
    for a in monos:
        for b in monos:
            c = tuple(x + y for x, y in zip(a, b))
            if sum(c) <= max_weight:
                mult[(label(a), label(b))] = [(1, label(c))]
    return AlgebraPresentation(operad, gens, style="strict", multiplication=mult,
                               name=f"Sym({','.join(names)}) weight <= {max_weight}")


def quasifree_abelianize(x: AlgebraPresentation) -> AlgebraPresentation:
    """Project a quasi-free Ass (or Poisson) presentation to the free commutative one."""
    if x.is_strict:
        raise PresentationError("quasifree_abelianize needs a quasi-free presentation")
    y = AlgebraPresentation("com", x.generators, {}, name=f"Ab({x.name})", token=x.token, validate=False)
    for l in x.leaves:
        out: Element = {}
        for node, c in x.dgen[l].items():
            fa.add_into(out, fa.to_kind(node, "C"), c)
        y.dgen[l] = _normalize(out)
    y.validate()
    return y


def restrict(x: AlgebraPresentation, operad: str) -> AlgebraPresentation:
    """Strict commutative algebra viewed as an associative one (same carrier)."""
    if not x.is_strict:
        raise PresentationError("restriction is implemented for strict algebras")
    y = AlgebraPresentation.__new__(AlgebraPresentation)
    y.__dict__.update(x.__dict__)
    y.operad = operad
    y.kind = kind_of(operad)
    return y
