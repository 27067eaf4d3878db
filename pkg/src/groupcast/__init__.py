"""Secure groupcast with shared keys: schemes, exact entropy checks, region bounds."""

__version__ = "0.1.0"

from .entropy import (
    BudgetExceeded,
    VerificationReport,
    conditional_entropy,
    entropy,
    mutual_information,
    scheme_system,
    verify_scheme,
    verify_scheme_linear,
)
from .field import FieldMatrix, mat_det, mat_rank, right_null_space, vandermonde
from .region import RegionQuery, Status, region_membership, region_scan, witness_scheme
from .schemes import (
    DecodingError,
    NotQualifiedError,
    Scheme,
    SchemeError,
    SchemeParams,
    build_combinatorial_scheme,
    build_independent_keys_scheme,
    build_min_bandwidth_scheme,
    build_min_storage_scheme,
    build_n2k4_joint_scheme,
    build_n3k5_scheme,
    decode,
    encode,
    space_share,
    symmetrize,
)
from .simulator import exhaustive_leakage_audit, run_session, setup

__all__ = [
    "BudgetExceeded",
    "DecodingError",
    "FieldMatrix",
    "NotQualifiedError",
    "RegionQuery",
    "Scheme",
    "SchemeError",
    "SchemeParams",
    "Status",
    "VerificationReport",
    "build_combinatorial_scheme",
    "build_independent_keys_scheme",
    "build_min_bandwidth_scheme",
    "build_min_storage_scheme",
    "build_n2k4_joint_scheme",
    "build_n3k5_scheme",
    "conditional_entropy",
    "decode",
    "encode",
    "entropy",
    "exhaustive_leakage_audit",
    "mat_det",
    "mat_rank",
    "mutual_information",
    "region_membership",
    "region_scan",
    "right_null_space",
    "run_session",
    "scheme_system",
    "setup",
    "space_share",
    "symmetrize",
    "vandermonde",
    "verify_scheme",
    "verify_scheme_linear",
    "witness_scheme",
]
