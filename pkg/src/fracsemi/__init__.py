"""Desk-scale numerics for fractional powers of semigroup generators.

Subpackages cover stable subordinator densities, the coefficient
machinery behind complete-monotonicity statements, concrete positive
semigroups with their subordinated and fractional variants, gradient
forms with semigroup bmo/BMO seminorms, and the sectorial H-infinity
functional calculus.
"""

__version__ = "0.1.0"
