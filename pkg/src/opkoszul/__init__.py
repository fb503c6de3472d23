"""Exact desk-scale computations with operadic bar constructions over Q.

Derived abelianization, the commutator filtration tower of associative
algebras, cube connectivity calculus and the unit/counit checks of the
Koszul comparison, with shifted Poisson operads standing in for E_n.
"""

__version__ = "0.1.0"
