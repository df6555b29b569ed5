"""Complementary-multiphase quantum search: planning, optimization, verification."""

from cmqsearch.kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
