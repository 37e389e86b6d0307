"""Exact Sherali-Adams, BLP and k-consistency checks through tensor-valued homomorphisms."""

__version__ = "0.1.0"
