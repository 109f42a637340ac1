"""Curvature invariants and conformal-flatness verification for almost
Hermitian coordinate charts."""

from . import axioms, classify, curvature, expressions, frames, immersions, models, reportio

__all__ = ["axioms", "classify", "curvature", "expressions", "frames",
           "immersions", "models", "reportio"]
