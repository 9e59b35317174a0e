"""Bivariate multi-point evaluation, interpolation and modular composition
over prime fields, organized around an explicit precompute/online split."""

from .ff import FieldCtx, FieldElement, build_quadratic_extension

__all__ = ["FieldCtx", "FieldElement", "build_quadratic_extension"]
__version__ = "0.1.0"
