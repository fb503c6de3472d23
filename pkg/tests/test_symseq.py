from math import factorial

from opkoszul.complexes import ChainComplex
from opkoszul.operads import make_ass, make_com
from opkoszul.symseq import SymmetricSequence, circle, schur_apply


def test_composite_dimensions():
    com = make_com(4, validate_cap=2).carrier
    ass = make_ass(4, validate_cap=2).carrier
    # Com o Com (n) counts set partitions of n
    assert [circle(com, com, cap=4).dim(n) for n in (1, 2, 3, 4)] == [1, 2, 5, 15]
    # Ass o Ass (2): two ordered one-block trees plus two two-level trees
    assert circle(ass, ass, cap=2).dim(2) == 4


def test_unit_is_neutral():
    ass = make_ass(4, validate_cap=2).carrier
    unit = SymmetricSequence.unit(4)
    assert [circle(unit, ass, cap=4).dim(n) for n in range(1, 5)] == [factorial(n) for n in range(1, 5)]
    assert [circle(ass, unit, cap=4).dim(n) for n in range(1, 5)] == [factorial(n) for n in range(1, 5)]


def test_actions_are_representations():
    make_ass(4, validate_cap=2).carrier.validate()
    make_com(4, validate_cap=2).carrier.validate()


def test_schur_functor_on_odd_line():
    x = ChainComplex.from_dims({1: 1}, lo=0, hi=5)
    sym = schur_apply(make_com(5, validate_cap=2).carrier, x, max_degree=5)
    tens = schur_apply(make_ass(5, validate_cap=2).carrier, x, max_degree=5)
    # odd generator: its square vanishes in the symmetric algebra, not in the tensor algebra
    assert [sym.dim(i) for i in range(1, 6)] == [1, 0, 0, 0, 0]
    assert [tens.dim(i) for i in range(1, 6)] == [1, 1, 1, 1, 1]
