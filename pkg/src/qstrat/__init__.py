"""Quillen approximation of mod-l equivariant cohomology for finite groups."""

from qstrat.linalg import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
