"""Exact feasibility engine and numerical harness for power-weighted multilinear forms of Brascamp-Lieb type."""

__version__ = "0.1.0"
