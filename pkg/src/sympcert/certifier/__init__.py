"""Coefficient checks, vanishing and non-triviality certificates, proof replay."""

from .certificate import Certificate, RejectionLimit, Sampler, sub_seed
from .coeffs import (
    QUOTED_CLAIMS,
    Claim,
    CoeffCheck,
    CoeffMap,
    check_claims,
    check_coeff_identity,
    coefficient_rules,
    factor_heuristic,
    relation_coeff_map,
)
from .derivation import PROOF_SCRIPTS, DerivationScript, derivation_check
from .instances import CASES, COMPATIBLE, PAIRS, StructuredCase, vanishing_certify, vanishing_profile
from .nontrivial import FAMILIES, FamilyValue, family_substitute, nontriviality_certify, verify_witness

__all__ = [
    "CASES", "COMPATIBLE", "FAMILIES", "PAIRS", "PROOF_SCRIPTS", "QUOTED_CLAIMS",
    "Certificate", "Claim", "CoeffCheck", "CoeffMap", "DerivationScript", "FamilyValue",
    "RejectionLimit", "Sampler", "StructuredCase", "check_claims", "check_coeff_identity",
    "coefficient_rules", "derivation_check", "factor_heuristic", "family_substitute",
    "nontriviality_certify", "relation_coeff_map", "sub_seed", "vanishing_certify",
    "vanishing_profile", "verify_witness",
]
