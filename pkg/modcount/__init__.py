"""
(modcount) Exact lattice counts on moduli spaces of curves, their quasi-polynomials,
and the Hurwitz, Harer-Zagier and Laplace-transform cross-checks built on them.
"""

__version__ = "1.0.0"
