"""Exact binary digits of square roots and of values built to mirror them."""

from .exactcore import (
    BitSequence,
    DyadicRational,
    PerfectSquareError,
    PrecisionError,
    VerificationError,
    borrow_subtract_bits,
    complement,
    dyadic_bits,
    exact_bits_rational_minus_scaled_sqrt,
    exact_bits_scaled_sqrt_minus_rational,
    is_perfect_square,
    isqrt,
    sqrt_bits,
)
from .construction import (
    ConstructionSet,
    ValueIdentityReport,
    build_construction,
    construction_from_dict,
    construction_to_dict,
    default_l,
    verify_value_identities,
)
from .tails import (
    AlignmentReport,
    TailMatch,
    alignment_report,
    find_tail_match,
    verify_nu_tail_equality,
    verify_omega1_complement,
    verify_omega2_shift,
)
from .stats import (
    FrequencyCurve,
    FrequencyPoint,
    FrequencyRelationReport,
    LimsupEstimate,
    RelationRow,
    SubsequenceSpec,
    complement_pair_check,
    default_checkpoints,
    frequency,
    frequency_curve,
    frequency_from_square,
    frequency_relation_report,
    limsup_estimate,
    ones_count_prefix,
    sqrt_interval_bits,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "BitSequence",
    "ConstructionSet",
    "DyadicRational",
    "FrequencyCurve",
    "FrequencyPoint",
    "FrequencyRelationReport",
    "LimsupEstimate",
    "PerfectSquareError",
    "PrecisionError",
    "RelationRow",
    "SubsequenceSpec",
    "TailMatch",
    "ValueIdentityReport",
    "VerificationError",
    "alignment_report",
    "borrow_subtract_bits",
    "build_construction",
    "complement",
    "complement_pair_check",
    "construction_from_dict",
    "construction_to_dict",
    "default_checkpoints",
    "default_l",
    "dyadic_bits",
    "exact_bits_rational_minus_scaled_sqrt",
    "exact_bits_scaled_sqrt_minus_rational",
    "find_tail_match",
    "frequency",
    "frequency_curve",
    "frequency_from_square",
    "frequency_relation_report",
    "is_perfect_square",
    "isqrt",
    "limsup_estimate",
    "ones_count_prefix",
    "sqrt_bits",
    "sqrt_interval_bits",
    "verify_nu_tail_equality",
    "verify_omega1_complement",
    "verify_omega2_shift",
    "verify_value_identities",
]
