"""Arithmetic Lie theory on GL_n at finite p-adic precision."""

from __future__ import annotations

from .errors import DeltaGLError
from .inner import (
    charpoly_lambda,
    charpoly_lift_eval,
    conjugation_lift_eval,
    dstarstar,
    inner_obstruction_witness,
    isospectral_twist_eval,
    p_ij_matrix,
)
from .jet import (
    DeltaLieElement,
    FullGL,
    JetPoint,
    Normalizer,
    Orthogonal,
    SpecialLinearGroup,
    Torus,
    bracket_delta,
    cartan_decompose,
    delta_lie_membership,
    ex_r,
    ghost,
    jet_inv,
    jet_mul,
    minus_delta_r,
    nabla1,
    plus_delta_r,
    split_form,
    star_delta,
)
from .lifts import (
    CharPoly,
    Chern,
    Conjugation,
    Hermitian,
    InnerTwist,
    SpecialLinear,
    Standard,
    Twist,
    christoffel,
    evaluate,
    legendre_eigen_form,
    legendre_matrix,
    lift_from_json,
    lift_to_json,
    log_derivative,
    verify_b_symmetric,
    verify_h_horizontal,
    verify_prime_integral,
)
from .linalg import PMatrix, char_poly, discriminant, hensel_eigen, principal_root_matrix
from .padic import PadicContext, PadicScalar, delta_scalar, frobenius, principal_root_scalar, teichmuller
from .solver import DeltaLinearProblem, audit_prime_integrals, equation_forms, fixed_point_solve, solve

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
