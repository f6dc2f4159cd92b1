"""Derived categories of the two-vertex algebras Λ^{p,q} with exact rational arithmetic.

Λ^{p,q} is the path algebra of the quiver with ``p`` arrows ``α_i: 1 -> 2`` and
``q`` arrows ``β_j: 2 -> 1`` modulo ``β_j α_i = 0``.  The subpackages build the
algebra, complexes of projectives and their homotopy category, two-term
silting theory, endomorphism algebras, and the derived equivalences ω and ν.
"""

__version__ = "0.1.0"
