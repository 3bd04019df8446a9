"""Frobenius and Cartier invariants of hypersurfaces in prime characteristic.

Exact computation of test module filtrations, F-jumping numbers, F-pure
thresholds, nilpotence of Cartier structures on graded pieces, non-F-pure
submodule filtrations, and positive-characteristic Bernstein-Sato
polynomials, for twisted Cartier structures on polynomial rings over prime
fields.
"""

from .budgets import Budgets, DEFAULT_BUDGETS, max_level
from .cartmod import (
    CartierModuleDescriptor,
    StableImage,
    TestElementReport,
    fpure_replacement,
    tau_zero,
    underline,
    validate_test_element,
)
from .errors import (
    CartierLabError,
    InternalInvariantError,
    ParseError,
    ResourceBudgetError,
    RingMismatchError,
    StabilizationError,
    ValidationError,
)
from .filtration import (
    GradedPiece,
    JumpReport,
    NilpotenceVerdict,
    TauRequest,
    TestModuleFiltration,
    check_kappa_division,
    check_skoda,
    fpt,
    graded_piece,
    jumping_numbers,
    nilpotence_verdict,
    tau,
    tau_full,
    tau_left,
    validate_a_e,
)
from .frobenius import bracket_power, cartier_image, pe_root
from .bernstein import (
    BSJumpCheck,
    BSReport,
    bs_polynomial,
    check_bs_roots_sigma,
    gamma_set,
)
from .ideals import (
    Ideal,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    ideal_member,
    ideal_product_poly,
    ideal_strictly_contains,
    ideal_sum,
    normal_form,
)
from .ring import (
    Polynomial,
    RingSpec,
    format_rational,
    parse_rational,
    poly_parse,
    poly_pow,
    rational_ceil_mul,
    rational_is_integer,
)
from .sigma import (
    GrSigma,
    SigmaResult,
    SigmaTauReport,
    SigmaVariantsReport,
    gr_sigma,
    sigma,
    sigma_nilpotence,
    sigma_right_limit,
    sigma_tau_comparison,
    sigma_variants_check,
)

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "DEFAULT_BUDGETS",
    "max_level",
    "CartierModuleDescriptor",
    "StableImage",
    "TestElementReport",
    "fpure_replacement",
    "tau_zero",
    "underline",
    "validate_test_element",
    "CartierLabError",
    "InternalInvariantError",
    "ParseError",
    "ResourceBudgetError",
    "RingMismatchError",
    "StabilizationError",
    "ValidationError",
    "GradedPiece",
    "JumpReport",
    "NilpotenceVerdict",
    "TauRequest",
    "TestModuleFiltration",
    "check_kappa_division",
    "check_skoda",
    "fpt",
    "graded_piece",
    "jumping_numbers",
    "nilpotence_verdict",
    "tau",
    "tau_full",
    "tau_left",
    "validate_a_e",
    "bracket_power",
    "cartier_image",
    "pe_root",
    "BSJumpCheck",
    "BSReport",
    "bs_polynomial",
    "check_bs_roots_sigma",
    "gamma_set",
    "Ideal",
    "groebner_basis",
    "ideal_contains",
    "ideal_equal",
    "ideal_member",
    "ideal_product_poly",
    "ideal_strictly_contains",
    "ideal_sum",
    "normal_form",
    "Polynomial",
    "RingSpec",
    "format_rational",
    "parse_rational",
    "poly_parse",
    "poly_pow",
    "rational_ceil_mul",
    "rational_is_integer",
    "GrSigma",
    "SigmaResult",
    "SigmaTauReport",
    "SigmaVariantsReport",
    "gr_sigma",
    "sigma",
    "sigma_nilpotence",
    "sigma_right_limit",
    "sigma_tau_comparison",
    "sigma_variants_check",
]
