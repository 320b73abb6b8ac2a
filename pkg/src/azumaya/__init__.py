"""Algebras with involution over finite rings and their adjoint groups.

Modules: ``exactring`` (finite rings and quadratic étale extensions),
``invalg`` (algebras with involution, types, isomorphism), ``autgrp``
(automorphism points and classical orders), ``descent`` (cocycles, twisted
forms, H^1), ``specialize`` (chain-ring reduction) and ``cli``.
"""
from .errors import AzumayaError, TooLarge
from .exactring import ChainRing, ExtensionField, PrimeField, ProductRing, QuadraticEtale, RingMap
from .invalg import AlgebraWithInvolution, InvolutionKind, make_split, classical_type, verify_involution

__all__ = [
    "AzumayaError", "TooLarge", "ChainRing", "ExtensionField", "PrimeField", "ProductRing", "QuadraticEtale",
    "RingMap", "AlgebraWithInvolution", "InvolutionKind", "make_split", "classical_type", "verify_involution",
]
