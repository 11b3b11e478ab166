"""Formula-Pair reductions to homogeneous pattern matching and membership."""

from .builders import (
    ReductionInstance, build_matching, build_matching_cpc, build_matching_generic,
    build_membership_from_matching, build_membership_opoc, build_reduction, check_helper,
    helper_gadget, to_membership,
)
from .changes import ChangeProfile, check_change_claim, pattern_changes, symbol_changes
from .gadgets import ALL_TYPES, MATCHING_TYPES, TYPE_CODES, encode_gates, instantiate
from .verify import VerifyReport, read_bundle, verify_reduction, write_bundle

__all__ = [
    "ALL_TYPES", "MATCHING_TYPES", "TYPE_CODES", "ChangeProfile", "ReductionInstance", "VerifyReport",
    "build_matching", "build_matching_cpc", "build_matching_generic", "build_membership_from_matching",
    "build_membership_opoc", "build_reduction", "check_change_claim", "check_helper", "encode_gates",
    "helper_gadget", "instantiate", "pattern_changes", "read_bundle", "symbol_changes", "to_membership",
    "verify_reduction", "write_bundle",
]
