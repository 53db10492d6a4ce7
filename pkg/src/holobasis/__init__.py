"""Uniformly bounded orthonormal bases of homogeneous polynomials on the unit balls of C^2 and C^3."""

from holobasis.errors import DomainError

__version__ = "0.1.0"

__all__ = ["DomainError", "__version__"]
