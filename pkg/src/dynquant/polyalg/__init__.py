"""Exact operator algebra on polynomials in (p0, p1, p2, p3)."""
from .gaussian import GaussianRational
from .operators import DiffOperator, op_apply, op_commutator
from .physics import (
    IdentityReport,
    algebra_identities,
    background_image,
    build_background_operators,
    build_lorentz_generators,
    build_position_operators,
    explicit_lorentz_generators,
    momentum_operators,
    run_algebra_suite,
    verify_identity,
)
from .poly import GaussianRationalPoly, monomials

__all__ = [
    "GaussianRational", "GaussianRationalPoly", "DiffOperator", "IdentityReport",
    "op_apply", "op_commutator", "monomials", "verify_identity",
    "build_position_operators", "build_lorentz_generators", "explicit_lorentz_generators",
    "build_background_operators", "background_image", "momentum_operators",
    "algebra_identities", "run_algebra_suite",
]
