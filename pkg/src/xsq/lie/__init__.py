"""Exact rational Lie algebras, Lie crossed modules and their tensor product."""

from .algebra import (
    LieAction,
    LieAlgebra,
    LieCrossedModule,
    LieIdeal,
    abelian_lie,
    adjoint_action,
    build_lie_algebra,
    identity_lie_xmod,
    lie_algebra_report,
    make_lie_xmod,
    nonabelian2,
    sl2,
    verify_lie_action,
    verify_lie_xmod,
    zero_action,
    zero_lie_xmod,
)
from .linalg import Subspace, rat, rat_array, rref
from .tensor import (
    LIE_XSQ_AXIOMS,
    LieCrossedSquare,
    LiePair,
    LieTensor,
    lie_intersection_square,
    lie_tensor,
    lie_tensor_swap,
    make_lie_pair,
    universal_lie_morphism,
    verify_lie_crossed_square,
    verify_lie_pairing,
)

__all__ = [
    "abelian_lie",
    "adjoint_action",
    "build_lie_algebra",
    "identity_lie_xmod",
    "lie_algebra_report",
    "lie_intersection_square",
    "lie_tensor",
    "lie_tensor_swap",
    "LIE_XSQ_AXIOMS",
    "LieAction",
    "LieAlgebra",
    "LieCrossedModule",
    "LieCrossedSquare",
    "LieIdeal",
    "LiePair",
    "LieTensor",
    "make_lie_pair",
    "make_lie_xmod",
    "nonabelian2",
    "rat",
    "rat_array",
    "rref",
    "sl2",
    "Subspace",
    "universal_lie_morphism",
    "verify_lie_action",
    "verify_lie_crossed_square",
    "verify_lie_pairing",
    "verify_lie_xmod",
    "zero_action",
    "zero_lie_xmod",
]
