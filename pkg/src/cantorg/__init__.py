"""Computational kernel for a finitely presented group acting on infinite
binary sequences: word-problem normal forms, coset calculus, cube-cluster
combinatorics, and a cubulation pipeline, all cross-checked against an
exact evaluation oracle on eventually periodic sequences."""

__version__ = "0.1.0"
