"""Exact analysis of one-dimensional substitutions with Pisot dilatations:
first Cech cohomology of the tiling space, coincidence rank of constant-length
substitutions, empirical exact-regularity verification, exact cylinder-set
measures, and triple-cover constructions with coincidence rank three.
"""

from .algebra import (
    FieldElement,
    Factorization,
    IntPolynomial,
    NumberField,
    PisotReport,
    char_poly,
    factor_over_integers,
    field_arith,
    field_for_polynomial,
    in_Z_one_over_a0,
    minimal_polynomial_of_dilatation,
    p_prime_at_lambda,
    pisot_check,
    poly_from_coeffs,
    solve_kernel_over_field,
)
from .cohomology import (
    CohomologyReport,
    build_transition_complex,
    cech_h1_dimension,
    edge_dynamics,
    eventual_range,
    is_homological_pisot,
)
from .coincidence import (
    CoincidenceReport,
    PureCore,
    aperiodicity_check,
    check_cr_divides_norm,
    coincidence_rank,
    column_semigroup,
    measure_fraction_witness,
    pure_core,
    quotient_substitution,
    strongly_coincident_classes,
    to_constant_length,
)
from .core import (
    Substitution,
    abelianization,
    fixed_point_prefix,
    is_primitive,
    iterate,
    language,
    parse_substitution,
    serialize_substitution,
    transitions,
)
from .cover import (
    CoverResult,
    CoverSpec,
    PermutationAssignment,
    build_triple_cover,
    cover_from_matrix,
    lift_word,
    make_padding,
    parse_cover_spec,
    standard_assignment,
    validate_cover,
)
from .errors import (
    ContradictionFlag,
    LatticeHypothesisError,
    ParseError,
    PisotsubError,
    PrecisionError,
    PreconditionError,
    ResourceLimitError,
    ValidationError,
)
from .measure import (
    CylinderMeasure,
    collar,
    companion_limit_vector,
    cylinder_measure,
    frequencies,
    rationality_divisibility_check,
)
from .regularity import (
    ERPFit,
    TileGeometry,
    coordinates,
    count_occurrences,
    fit_erp_functional,
    tile_geometry,
    verify_erp,
)

__version__ = "0.1.0"
