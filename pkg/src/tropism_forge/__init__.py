"""Exact Puiseux series developments of positive dimensional solution sets.

The pipeline: Newton polytopes and pretropism cones, a unimodular monomial
transform built from Smith/Hermite normal forms, exact solving of the
initial form system over a cyclotomic field, and a second series term.
"""
__version__ = "0.1.0"
