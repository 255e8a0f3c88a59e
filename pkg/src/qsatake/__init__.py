"""Exact verification of graded quantum-supergroup data: R- and K-matrices, Satake diagrams, coideal generators."""

__version__ = "0.1.0"
