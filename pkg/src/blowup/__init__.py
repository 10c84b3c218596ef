"""Rees algebras and special fibers of height-two perfect ideals with linear presentation.

The package computes Groebner bases over QQ and F_p, Jacobian dual matrices,
heights of minor ideals and condition G_s, and checks the fiber-type and
birationality statements for presentations satisfying G_{d-1} but not G_d.
"""

__version__ = "0.1.0"

from .field import DEFAULT_PRIME, GF, QQ, CoeffField
from .poly import GREVLEX, LEX, AmbientMismatch, MonomialOrder, ParseError, Polynomial, PolyRing, VariableBlock
from .groebner import (
    Budget,
    BudgetExceeded,
    GroebnerBasis,
    Ideal,
    ZeroIdealError,
    buchberger,
    dimension,
    eliminate,
    height,
    ideal_equal,
    initial_degree,
    normal_form,
)
from .linmatrix import (
    LinearMatrix,
    ShapeError,
    SignedMinorVector,
    canonical_form,
    jacobian_dual,
    minors,
    rank_mod,
    signed_maximal_minors,
    symmetric_ideal,
)
from .invariants import (
    GsProfile,
    HypothesisError,
    PresentationInput,
    ReesPresentation,
    analytic_spread,
    check_Gs_ideal,
    check_Gs_module,
    compute_u,
    fiber_ideal,
    gs_profile,
    rees_from_generators,
    rees_ideal,
    sym_dimension,
)
from .theorems import (
    NotEvaluated,
    SpecializationData,
    TheoremViolation,
    VerificationReport,
    birationality_check,
    find_point,
    generate_gd_instance,
    generate_instance,
    inverse_representatives,
    is_expected_form,
    is_fiber_type,
    specialization_form,
    verify_det_identity,
    verify_main_theorem,
    verify_morey_ulrich,
    verify_specialized_MU,
)
