"""Exact-arithmetic engine for almost hypercomplex/quaternionic
skew-Hermitian structures: algebraic model construction, torsion of frame
and homogeneous connections, and classification of the intrinsic torsion
into its isotypic components."""

__version__ = "0.1.0"
