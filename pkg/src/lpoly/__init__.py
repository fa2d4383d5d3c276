"""Exact L-functions of exponential sums over small finite fields.

The package computes character sums and their L-polynomials with exact
cyclotomic integer arithmetic, measures q-adic Newton polygons through an
exact local-field valuation engine, and compares them against the predicted
Hodge-Stickelberger and generic Newton polygons together with the Hasse
polynomial stratification that controls when the generic polygon is attained.
"""

ENGINE_VERSION = "lpoly-0.1.0"

__version__ = "0.1.0"
