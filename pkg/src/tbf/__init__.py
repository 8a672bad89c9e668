"""Twisted conjugacy classes, Reidemeister numbers and their dual counts."""

from tbf.errors import TBFError
from tbf.groups import (
    FiniteEndo,
    FiniteGroup,
    build_from_cayley,
    build_from_permutations,
    compose,
    enumerate_endomorphisms,
    inner_auto,
    iterate,
    validate_endo,
)
from tbf.twisted import (
    ClassPartition,
    burnside_average,
    reidemeister_number,
    twisted_classes,
)
from tbf.intlinalg import INFINITE

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "ClassPartition",
    "FiniteEndo",
    "FiniteGroup",
    "TBFError",
    "build_from_cayley",
    "build_from_permutations",
    "burnside_average",
    "compose",
    "enumerate_endomorphisms",
    "inner_auto",
    "iterate",
    "reidemeister_number",
    "twisted_classes",
    "validate_endo",
]
