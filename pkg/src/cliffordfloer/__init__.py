"""Floer homology of (RP^k, T^k) in CP^k, computed at desk scale."""

__version__ = "0.1.0"
