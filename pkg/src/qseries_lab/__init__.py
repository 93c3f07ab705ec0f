"""Exact truncated q-series, partition oracles and a suite of identity checks."""

from .enumeration import PartitionConstraint, Tag, count, oracle_series, parse_constraint, partitions_of
from .qexpr import check_identity, eval_text, parse
from .qproducts import PochhammerSymbol, ThetaKind, poch, resolve, theta
from .report import Verdict, VerificationReport
from .series import Series, equal_up_to, series_from_coeffs
from .theorems import Tables, run_all

__all__ = [
    "PartitionConstraint", "PochhammerSymbol", "Series", "Tables", "Tag", "ThetaKind", "Verdict",
    "VerificationReport", "check_identity", "count", "equal_up_to", "eval_text", "oracle_series",
    "parse", "parse_constraint", "partitions_of", "poch", "resolve", "run_all", "series_from_coeffs",
    "theta",
]
__version__ = "0.1.0"
