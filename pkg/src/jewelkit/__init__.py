"""Exact combinatorics of jewels and sphere systems for the bordification of Outer space."""
from .errors import CertificationError, JewelkitError, PreconditionError
from .multigraph import MultiGraph

__all__ = ["CertificationError", "JewelkitError", "MultiGraph", "PreconditionError"]
__version__ = "0.1.0"
