"""Exact moments, algebraic certificates and norms for matrices over Q[F_r] and Q[Z^r]."""

from sgr.errors import (
    ContractError,
    DomainError,
    MismatchError,
    PathError,
    PrecisionError,
    ResourceError,
    SgrError,
    UnsupportedInputError,
)
from sgr.groupring import RingElem, RingMatrix
from sgr.moments import MomentData, moment_sequence

__all__ = [
    "ContractError",
    "DomainError",
    "MismatchError",
    "MomentData",
    "PathError",
    "PrecisionError",
    "ResourceError",
    "RingElem",
    "RingMatrix",
    "SgrError",
    "UnsupportedInputError",
    "moment_sequence",
]
