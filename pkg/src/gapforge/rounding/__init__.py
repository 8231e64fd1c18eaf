"""Rounding schemes, their leading-order advantage and the S_H pattern sums behind them."""
from .almost_monarchy import almost_monarchy_advantage, delta_floor_check, find_threshold
from .hypergraph import BiasData, HypergraphPattern, check_identities, pattern, s_aggregate, s_direct
from .mixture import Mixture, NotCertified
from .monarchy import monarchy_advantage, monarchy_fourier
from .operators import (ExpectationMap, Monomial, SignedSchemeMixture, apply_chi_pair,
                        apply_chi_single, apply_flip, apply_parity, synthesize_monomial)

__all__ = [
    "BiasData", "ExpectationMap", "HypergraphPattern", "Mixture", "Monomial", "NotCertified",
    "SignedSchemeMixture", "almost_monarchy_advantage", "apply_chi_pair", "apply_chi_single",
    "apply_flip", "apply_parity", "check_identities", "delta_floor_check", "find_threshold",
    "monarchy_advantage", "monarchy_fourier", "pattern", "s_aggregate", "s_direct",
    "synthesize_monomial",
]
