"""Exact verification of integrality-gap certificates and rounding schemes for LTF predicates."""
from .exactnum import hull_member, psd_check, rat, rat_str
from .gapverify import GapInstance, verify_perfect_gap
from .polytope import BiasProfile
from .predicate import Constraint, LinearForm, Predicate, fourier_transform

__version__ = "0.1.0"

__all__ = [
    "BiasProfile", "Constraint", "GapInstance", "LinearForm", "Predicate",
    "fourier_transform", "hull_member", "psd_check", "rat", "rat_str", "verify_perfect_gap",
]
