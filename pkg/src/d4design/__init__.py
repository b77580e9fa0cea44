"""Exact verification of design, lattice and q-series identities for the D4 lattice."""

__version__ = "0.1.0"
