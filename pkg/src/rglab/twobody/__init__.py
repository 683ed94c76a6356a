"""Two-body cusp limit, interaction commutators, Hardy chain and the W-cancellation algebra."""

from .commutator import interaction_commutator_identity
from .cusp import hessian_cusp, singular_limit_estimate
from .hardy import hardy_chain_verify
from .rewrite import w_cancellation_reduce
from .sphere import SphereQuadrature, sphere_second_moment

__all__ = [
    "interaction_commutator_identity", "hessian_cusp", "singular_limit_estimate",
    "hardy_chain_verify", "w_cancellation_reduce", "SphereQuadrature", "sphere_second_moment",
]
