"""Exact calculus on exp-polynomial functions and operator-domain checks."""

from .domain import (
    DeltaHamiltonian,
    DomainReport,
    Jet,
    RadialHamiltonian,
    apply_delta_hamiltonian,
    apply_radial_hamiltonian,
    boundary_jet,
    domain_order,
    iterate,
    l2_inner,
    l2_norm_squared,
)
from .expoly import (
    DivergentIntegralError,
    ExpPolyTerm,
    HalfLineFunction,
    LineFunction,
    SingularTermError,
    differentiate,
    multiply,
)
from .jetsystem import potential_compatibility_delta

__all__ = [
    "DeltaHamiltonian", "DomainReport", "Jet", "RadialHamiltonian",
    "apply_delta_hamiltonian", "apply_radial_hamiltonian", "boundary_jet",
    "domain_order", "iterate", "l2_inner", "l2_norm_squared",
    "DivergentIntegralError", "ExpPolyTerm", "HalfLineFunction", "LineFunction",
    "SingularTermError", "differentiate", "multiply", "potential_compatibility_delta",
]
