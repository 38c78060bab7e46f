"""Canonical p-dimension of generalized Severi-Brauer and flag varieties of
central division algebras, with certified 2-incompressibility of X_e(A)
for ind A = 2e a power of 2."""

__version__ = "0.1.0"
