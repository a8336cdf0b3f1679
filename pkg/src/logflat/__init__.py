"""logflat: exact flatness criteria for monoids, graded rings and nodal gluings."""

__version__ = "0.1.0"
