"""Computing with finite semiquandles and their knot-theoretic invariants."""

__version__ = "0.1.0"
