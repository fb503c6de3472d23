"""The shifted Poisson layer: commutator towers, conservativity and
abelianization ranges for algebras over ``poisson:n`` with n >= 2.

The shifted Poisson operad stands in for the chain-level E_n operad (it is
its homology); every check here consumes only connectivity facts about the
weight truncations, which the surrogate satisfies by construction.
"""

from __future__ import annotations

from typing import Dict, Mapping, Optional, Sequence

from . import freealg as fa
from .algebras import AlgebraPresentation, PresentationError
from .bar import BarComplex, algebra_complex, module, morphism_map
from .complexes import ChainMap
from .freealg import Element
from .reports import Report
from .towers import (Tower, ab_connectivity_check, completeness_check, connectivity_lemma_check,
                     factorization_check, nc_tower, piece_bar)

SURROGATE_NOTE = "computed for the shifted Poisson surrogate; transfer to a chain-level E_n model is not assumed"


def _require_poisson(x: AlgebraPresentation) -> int:
    if not x.kind.startswith("P"):
        raise PresentationError("expects an algebra over poisson:n")
    n = int(x.kind[1:])
    if n < 2:
        raise PresentationError("poisson:1 is handled by the associative modules; use n >= 2")
    return n


def en_tower(x: AlgebraPresentation, N: int, top: Optional[int] = None,
             weights: Optional[Sequence[int]] = None) -> Tower:
    """Stages ``P_n^{<=k} o^L_{P_n} x`` for k = 0..N; stage 0 is the derived abelianization."""
    _require_poisson(x)
    return nc_tower(x, N, top=top, weights=weights)


def _tag(r: Report, n: int) -> Report:
    r.name = f"poisson:{n} {r.name}"
    r.notes.append(SURROGATE_NOTE)
    return r


def en_completeness_check(x: AlgebraPresentation, N: int, top: int) -> Report:
    return _tag(completeness_check(x, N, top), _require_poisson(x))


def en_connectivity_lemma_check(x: AlgebraPresentation, kmax: int, top: int) -> Report:
    return _tag(connectivity_lemma_check(x, kmax, top), _require_poisson(x))


def en_factorization_check(x: AlgebraPresentation, k: int, top: int) -> Report:
    return _tag(factorization_check(x, k, top=top), _require_poisson(x))


def en_ab_connectivity_check(x: AlgebraPresentation, top: int) -> Report:
    """Iso for k <= l+1 and surjective at l+2, with l = conn(x)."""
    if not x.generators:
        return Report("abelianization connectivity", True, [], ["x = 0: vacuous"])
    return _tag(ab_connectivity_check(x, top, iso_range=lambda l: l + 1), _require_poisson(x))


# ---------------------------------------------------------------- morphisms
def morphism_images(src: AlgebraPresentation, tgt: AlgebraPresentation,
                    spec: Mapping[str, Sequence]) -> Dict[int, Element]:
    """Generator images of a morphism ``src -> tgt``; unnamed generators go to zero.

    ``spec`` maps generator names of ``src`` to ``(coefficient, word)`` lists
    in ``tgt`` (the differential syntax).  Degrees are checked here;
    compatibility with differentials is checked when a map is built.
    """
    if src.kind != tgt.kind:
        raise PresentationError("source and target must be algebras over the same operad")
    unknown = set(spec) - set(src.by_name)
    if unknown:
        raise PresentationError(f"unknown generators {sorted(unknown)}")
    out: Dict[int, Element] = {}
    for g, leaf in zip(src.generators, src.leaves):
        img = tgt.parse_element(spec.get(g.name, []))
        for node in img:
            if fa.deg(node) != g.degree:
                raise PresentationError(f"image of {g.name} has the wrong degree", g.name)
        out[leaf] = img
    return out


def _window_iso(f: ChainMap) -> Dict[int, bool]:
    lo = max(f.source.valid[0], f.target.valid[0])
    hi = min(f.source.valid[1], f.target.valid[1])
    return {i: f.is_iso_on(i) for i in range(lo, hi + 1)}


def en_conservativity_check(x: AlgebraPresentation, x2: AlgebraPresentation,
                            images: Dict[int, Element], N: int, top: int) -> Report:
    """If f is a quasi-isomorphism after abelianization, so is every truncated
    stage; and a non-equivalence f is detected by its abelianization.

    Stages are compared through the maps f induces on every bar complex.
    """
    _require_poisson(x)
    on_x = _window_iso(morphism_map(algebra_complex(x, top=top), algebra_complex(x2, top=top), images))
    ab = lambda a: BarComplex([(module("com"), a.kind)], a, top=top)
    on_ab = _window_iso(morphism_map(ab(x), ab(x2), images))
    ab_equiv, x_equiv = all(on_ab.values()), all(on_x.values())
    rows = [{"object": "x", "iso by degree": on_x}, {"object": "Ab", "iso by degree": on_ab}]
    stages_equiv = True
    for k in range(N + 1):
        for piece in ("eq", "le"):
            iso = _window_iso(morphism_map(piece_bar(x, k, piece, top=top), piece_bar(x2, k, piece, top=top),
                                           images))
            stages_equiv &= all(iso.values())
            rows.append({"object": f"{piece} {k}", "iso by degree": iso})
    ok = not ab_equiv or (stages_equiv and x_equiv)
    notes = [f"window top {top}", SURROGATE_NOTE]
    return Report("poisson conservativity", ok, rows, notes,
                  {"abelianization_equivalence": ab_equiv, "stages_equivalence": stages_equiv,
                   "map_equivalence": x_equiv})
