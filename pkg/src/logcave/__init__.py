"""Exact arithmetic for r-factor log-concavity, the operator L_r and its invariant region."""

__version__ = "0.1.0"

from .criteria import Certificate, certify_infinite, compare_criteria, quartic_check, symmetric_criterion
from .exactnum import R0, R1, QField, format_number, parse_number, parse_numbers
from .pascal import binomial_row, verify_range, verify_row
from .region import closure_test, correct_side, decompose, fixed_point, hypersurface_point, is_member, phi
from .seqcore import Seq, SymSeq, apply_l, apply_lr, is_ifold_lc, is_r_factor_lc, iterate_lr
from .witness import WitnessSpec, build_witness

__all__ = [
    "Certificate", "QField", "R0", "R1", "Seq", "SymSeq", "WitnessSpec",
    "apply_l", "apply_lr", "binomial_row", "build_witness", "certify_infinite",
    "closure_test", "compare_criteria", "correct_side", "decompose", "fixed_point",
    "format_number", "hypersurface_point", "is_ifold_lc", "is_member", "is_r_factor_lc",
    "iterate_lr", "parse_number", "parse_numbers", "phi", "quartic_check",
    "symmetric_criterion", "verify_range", "verify_row",
]
