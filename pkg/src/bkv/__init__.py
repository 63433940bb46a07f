"""Exact q-expansions, the Shimura lift and sign-equidistribution experiments
for half-integral weight eigenforms."""

from bkv.errors import (
    BKVError,
    ConstructionFailure,
    FormatError,
    InvalidArgument,
    PrecisionExceeded,
    RamanujanViolation,
)

__version__ = "0.1.0"

__all__ = [
    "BKVError",
    "ConstructionFailure",
    "FormatError",
    "InvalidArgument",
    "PrecisionExceeded",
    "RamanujanViolation",
]
