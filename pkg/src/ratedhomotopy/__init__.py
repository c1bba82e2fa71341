"""Metric invariants of rated graph decompositions, plus the skeleton
thickening construction for simplicial complexes."""

__version__ = "0.1.0"

from .chains import (
    AbelianGroup,
    ChainComplex,
    ChainMap,
    HomologyBasis,
    IntMatrix,
    cokernel,
    homology,
    induced_map,
    invariant_factors,
    smith_normal_form,
    verify_complex,
)
from .errors import ConsistencyError, DomainError, ValidationError
from .rates import Rate

__all__ = [
    "AbelianGroup",
    "ChainComplex",
    "ChainMap",
    "ConsistencyError",
    "DomainError",
    "HomologyBasis",
    "IntMatrix",
    "Rate",
    "ValidationError",
    "cokernel",
    "homology",
    "induced_map",
    "invariant_factors",
    "smith_normal_form",
    "verify_complex",
]
