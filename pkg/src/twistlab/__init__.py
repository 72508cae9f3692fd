"""Exact and numerical checks for Dehn twists, Floer-theoretic lower bounds and A-infinity bar complexes."""

__version__ = "0.1.0"
