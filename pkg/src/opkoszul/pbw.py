"""PBW basis of the associative operad and its commutator filtration."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, List, Tuple

from more_itertools import set_partitions

Word = Tuple[int, ...]


def _commutator(x: Dict[Word, int], y: Dict[Word, int]) -> Dict[Word, int]:
    out: Dict[Word, int] = {}
    for a, u in x.items():
        for b, v in y.items():
            out[a + b] = out.get(a + b, 0) + u * v
            out[b + a] = out.get(b + a, 0) - u * v
    return {k: v for k, v in out.items() if v}


def _lie_block(block: Tuple[int, ...]) -> List[Dict[Word, int]]:
    """Left-normed brackets starting with the least letter: a basis of Lie(block)."""
    first, rest = block[0], block[1:]
    out = []
    for perm in itertools.permutations(rest):
        acc = {(first,): 1}
        for letter in perm:
            acc = _commutator(acc, {(letter,): 1})
        out.append(acc)
    return out


def _product(x: Dict[Word, int], y: Dict[Word, int]) -> Dict[Word, int]:
    out: Dict[Word, int] = {}
    for a, u in x.items():
        for b, v in y.items():
            out[a + b] = out.get(a + b, 0) + u * v
    return out


@lru_cache(maxsize=None)
def pbw_elements(arity: int) -> Tuple[Tuple[int, Dict[Word, int]], ...]:
    """Basis of Ass(arity) as ``(weight, word -> coefficient)``.

    Each element is a product, blocks ordered by least letter, of multilinear
    Lie monomials over a set partition; its weight is the number of brackets.
    Elements of weight >= p span the p-th power of the commutator ideal.
    """
    out = []
    for partition in set_partitions(range(arity)):
        blocks = sorted(tuple(sorted(b)) for b in partition)
        for choice in itertools.product(*(_lie_block(b) for b in blocks)):
            acc = choice[0]
            for c in choice[1:]:
                acc = _product(acc, c)
            out.append((arity - len(blocks), acc))
    out.sort(key=lambda t: t[0])
    return tuple(out)
